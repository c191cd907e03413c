//! Scenario files and world construction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::{Cell, Direction};
use crate::error::SimError;
use crate::world::{AgentState, GridWorld, NoiseModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub width: i32,
    pub height: i32,
    pub teams: usize,
    pub agents_per_team: usize,
    /// Explicit obstacle cells; random placement when absent.
    pub obstacles: Option<Vec<[i32; 2]>>,
    /// Explicit gold cells, one piece per entry (repeat a cell for more).
    pub gold: Option<Vec<[i32; 2]>>,
    /// One depot per team.
    pub depots: Option<Vec<[i32; 2]>>,
    pub agents: Option<Vec<AgentSpec>>,
    pub obstacle_density: f64,
    pub gold_count: usize,
    pub capacity: u32,
    pub radius: u32,
    pub steps: u64,
    pub epsilon: f64,
    /// Cargo failure coefficient; defaults to `epsilon`.
    pub cargo_coefficient: Option<f64>,
    pub perception_epsilon: Option<f64>,
    pub action_epsilon: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub team: usize,
    pub pos: [i32; 2],
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            width: 20,
            height: 20,
            teams: 2,
            agents_per_team: 4,
            obstacles: None,
            gold: None,
            depots: None,
            agents: None,
            obstacle_density: 0.1,
            gold_count: 40,
            capacity: 3,
            radius: 2,
            steps: 500,
            epsilon: 0.0,
            cargo_coefficient: None,
            perception_epsilon: None,
            action_epsilon: None,
            seed: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        serde_json::from_str(text).map_err(|e| SimError::Invalid(e.to_string()))
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            perception: self.perception_epsilon.unwrap_or(self.epsilon),
            action: self.action_epsilon.unwrap_or(self.epsilon),
            cargo: self.cargo_coefficient.unwrap_or(self.epsilon),
        }
    }

    /// Copy with a different noise level; explicit per-channel overrides are kept.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        ScenarioConfig { epsilon, ..self.clone() }
    }
}

fn cell(c: [i32; 2]) -> Cell {
    Cell::new(c[0], c[1])
}

/// Builds a world from a scenario. Explicit placements are used as given;
/// anything left out is generated from `seed`.
pub fn load_scenario(cfg: &ScenarioConfig) -> Result<GridWorld, SimError> {
    let (w, h) = (cfg.width, cfg.height);
    if w < 5 || h < 5 {
        return Err(SimError::TooSmall(w, h));
    }
    let noise = cfg.noise();
    for (name, v) in [("perception epsilon", noise.perception), ("action epsilon", noise.action)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(SimError::Invalid(format!("{name} must be in [0,1], got {v}")));
        }
    }
    if !(noise.cargo >= 0.0 && noise.cargo.is_finite()) {
        return Err(SimError::Invalid(format!("cargo coefficient must be >= 0, got {}", noise.cargo)));
    }
    if !(0.0..1.0).contains(&cfg.obstacle_density) {
        return Err(SimError::Invalid("obstacle_density must be in [0,1)".into()));
    }
    if cfg.capacity == 0 {
        return Err(SimError::Invalid("capacity must be positive".into()));
    }
    if cfg.teams == 0 {
        return Err(SimError::Invalid("at least one team is required".into()));
    }
    let in_bounds = |what: &'static str, c: Cell| -> Result<(), SimError> {
        if c.x < 0 || c.y < 0 || c.x >= w || c.y >= h {
            Err(SimError::OutOfBounds { what, cell: c, width: w, height: h })
        } else {
            Ok(())
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let depots: Vec<Cell> = match &cfg.depots {
        Some(d) => d.iter().copied().map(cell).collect(),
        None => default_depots(w, h, cfg.teams)?,
    };
    if depots.len() != cfg.teams {
        return Err(SimError::Invalid(format!("{} depots for {} teams", depots.len(), cfg.teams)));
    }
    for &d in &depots {
        in_bounds("depot", d)?;
    }
    if depots.iter().collect::<BTreeSet<_>>().len() != depots.len() {
        return Err(SimError::Invalid("two teams share a depot cell".into()));
    }

    let explicit_agents: Option<Vec<(usize, Cell)>> =
        cfg.agents.as_ref().map(|a| a.iter().map(|s| (s.team, cell(s.pos))).collect());
    if let Some(agents) = &explicit_agents {
        for &(team, pos) in agents {
            in_bounds("agent", pos)?;
            if team >= cfg.teams {
                return Err(SimError::Invalid(format!("agent at {pos} has team {team} of {}", cfg.teams)));
            }
        }
    }

    let obstacles: BTreeSet<Cell> = match &cfg.obstacles {
        Some(o) => o.iter().copied().map(cell).collect(),
        None => {
            // keep a free ring around each depot and the explicit agent cells
            let mut reserved: BTreeSet<Cell> = BTreeSet::new();
            for &d in &depots {
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        reserved.insert(Cell::new(d.x + dx, d.y + dy));
                    }
                }
                for c in start_cells(d, w, h, cfg.agents_per_team, &BTreeSet::new()) {
                    reserved.insert(c);
                }
            }
            if let Some(a) = &explicit_agents {
                reserved.extend(a.iter().map(|&(_, p)| p));
            }
            let mut free: Vec<Cell> = all_cells(w, h).filter(|c| !reserved.contains(c)).collect();
            free.shuffle(&mut rng);
            let n = ((w * h) as f64 * cfg.obstacle_density).round() as usize;
            free.into_iter().take(n).collect()
        }
    };
    for &o in &obstacles {
        in_bounds("obstacle", o)?;
    }
    for &d in &depots {
        if obstacles.contains(&d) {
            return Err(SimError::Overlap { what: "depot", other: "an obstacle", cell: d });
        }
    }

    let agents: Vec<(usize, Cell)> = match explicit_agents {
        Some(a) => a,
        None => {
            let mut out = Vec::new();
            let mut taken = BTreeSet::new();
            for (team, &d) in depots.iter().enumerate() {
                let blocked: BTreeSet<Cell> = obstacles.iter().chain(&taken).chain(&depots).copied().collect();
                let cells = start_cells(d, w, h, cfg.agents_per_team, &blocked);
                if cells.len() < cfg.agents_per_team {
                    return Err(SimError::Invalid(format!("no room for team {team} near depot {d}")));
                }
                for c in cells {
                    taken.insert(c);
                    out.push((team, c));
                }
            }
            out
        }
    };
    let mut occupied = BTreeSet::new();
    for &(_, p) in &agents {
        if obstacles.contains(&p) {
            return Err(SimError::Overlap { what: "agent", other: "an obstacle", cell: p });
        }
        if !occupied.insert(p) {
            return Err(SimError::Overlap { what: "agent", other: "another agent", cell: p });
        }
    }

    let mut gold: BTreeMap<Cell, u32> = BTreeMap::new();
    match &cfg.gold {
        Some(g) => {
            for &c in g {
                let c = cell(c);
                in_bounds("gold", c)?;
                if obstacles.contains(&c) {
                    return Err(SimError::Overlap { what: "gold", other: "an obstacle", cell: c });
                }
                *gold.entry(c).or_default() += 1;
            }
        }
        None => {
            // only cells reachable from the first depot, never on a depot or start cell
            let reachable = reachable_from(depots[0], w, h, &obstacles);
            let mut pool: Vec<Cell> =
                reachable.into_iter().filter(|c| !depots.contains(c) && !occupied.contains(c)).collect();
            pool.shuffle(&mut rng);
            if pool.len() < cfg.gold_count {
                return Err(SimError::Invalid("not enough free cells for gold".into()));
            }
            for c in pool.into_iter().take(cfg.gold_count) {
                gold.insert(c, 1);
            }
        }
    }

    let agents =
        agents.into_iter().map(|(team, pos)| AgentState { team, pos, carried: 0, capacity: cfg.capacity }).collect();
    Ok(GridWorld::new(w, h, obstacles, depots, gold, agents, noise, cfg.radius, cfg.seed))
}

fn all_cells(w: i32, h: i32) -> impl Iterator<Item = Cell> {
    (0..h).flat_map(move |y| (0..w).map(move |x| Cell::new(x, y)))
}

fn default_depots(w: i32, h: i32, teams: usize) -> Result<Vec<Cell>, SimError> {
    match teams {
        1 => Ok(vec![Cell::new(w / 2, h / 2)]),
        2 => Ok(vec![Cell::new(w / 2 - 2, h / 2), Cell::new(w / 2 + 1, h / 2)]),
        n => Err(SimError::Invalid(format!("{n} teams need explicit depots"))),
    }
}

/// The `n` free cells closest to `depot` (excluding it), by BFS order.
fn start_cells(depot: Cell, w: i32, h: i32, n: usize, blocked: &BTreeSet<Cell>) -> Vec<Cell> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::from([depot]);
    let mut queue = VecDeque::from([depot]);
    while let Some(c) = queue.pop_front() {
        if out.len() == n {
            break;
        }
        if c != depot && !blocked.contains(&c) {
            out.push(c);
        }
        for d in Direction::ALL {
            let next = c.step(d);
            if next.x >= 0 && next.y >= 0 && next.x < w && next.y < h && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    out
}

pub fn reachable_from(start: Cell, w: i32, h: i32, obstacles: &BTreeSet<Cell>) -> BTreeSet<Cell> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for d in Direction::ALL {
            let n = c.step(d);
            if n.x >= 0 && n.y >= 0 && n.x < w && n.y < h && !obstacles.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Random-map scenario used when only a seed is given.
pub fn random_scenario(seed: u64) -> ScenarioConfig {
    ScenarioConfig { seed, ..Default::default() }
}
