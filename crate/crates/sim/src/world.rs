use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use asl::{Literal, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{Action, Cell};
use crate::error::SimError;

/// Misreading and failure rates. All zero gives the noise-free world.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    /// Per-reading perturbation probability.
    pub perception: f64,
    /// Probability that a submitted action is replaced by a random one.
    pub action: f64,
    /// Cargo failure coefficient `c`: failure probability is c * carried / capacity.
    pub cargo: f64,
}

impl NoiseModel {
    pub fn uniform(epsilon: f64) -> Self {
        NoiseModel { perception: epsilon, action: epsilon, cargo: epsilon }
    }

    pub fn none() -> Self {
        Self::uniform(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentState {
    pub team: usize,
    pub pos: Cell,
    pub carried: u32,
    pub capacity: u32,
}

/// Counters for calibrating the noise model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoiseStats {
    pub readings: u64,
    pub perturbed: u64,
    pub actions: u64,
    pub replaced: u64,
    pub cargo_failures: u64,
}

/// Result of one agent's action in a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub submitted: Action,
    pub executed: Action,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Percept {
    pub literals: BTreeSet<Literal>,
}

#[derive(Clone, Debug)]
pub struct GridWorld {
    width: i32,
    height: i32,
    obstacles: BTreeSet<Cell>,
    depots: Vec<Cell>,
    gold: BTreeMap<Cell, u32>,
    agents: Vec<AgentState>,
    step: u64,
    scores: Vec<u32>,
    initial_gold: u32,
    noise: NoiseModel,
    radius: u32,
    rng: ChaCha8Rng,
    stats: NoiseStats,
}

impl GridWorld {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        width: i32,
        height: i32,
        obstacles: BTreeSet<Cell>,
        depots: Vec<Cell>,
        gold: BTreeMap<Cell, u32>,
        agents: Vec<AgentState>,
        noise: NoiseModel,
        radius: u32,
        seed: u64,
    ) -> Self {
        let initial_gold = gold.values().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // separate stream from the one that generated the map
        rng.set_stream(1);
        let scores = vec![0; depots.len()];
        GridWorld {
            width,
            height,
            obstacles,
            depots,
            gold,
            agents,
            step: 0,
            scores,
            initial_gold,
            noise,
            radius,
            rng,
            stats: NoiseStats::default(),
        }
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn set_noise(&mut self, noise: NoiseModel) {
        self.noise = noise;
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn depots(&self) -> &[Cell] {
        &self.depots
    }

    pub fn obstacles(&self) -> &BTreeSet<Cell> {
        &self.obstacles
    }

    pub fn gold(&self) -> &BTreeMap<Cell, u32> {
        &self.gold
    }

    pub fn gold_at(&self, c: Cell) -> u32 {
        self.gold.get(&c).copied().unwrap_or(0)
    }

    pub fn scores(&self) -> &[u32] {
        &self.scores
    }

    pub fn initial_gold(&self) -> u32 {
        self.initial_gold
    }

    pub fn stats(&self) -> NoiseStats {
        self.stats
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && c.x < self.width && c.y < self.height
    }

    pub fn is_obstacle(&self, c: Cell) -> bool {
        self.obstacles.contains(&c)
    }

    pub fn agent_at(&self, c: Cell) -> Option<usize> {
        self.agents.iter().position(|a| a.pos == c)
    }

    /// In bounds, not an obstacle, no agent.
    pub fn is_free(&self, c: Cell) -> bool {
        self.in_bounds(c) && !self.is_obstacle(c) && self.agent_at(c).is_none()
    }

    /// On-ground + carried + deposited.
    pub fn gold_total(&self) -> u32 {
        self.gold.values().sum::<u32>()
            + self.agents.iter().map(|a| a.carried).sum::<u32>()
            + self.scores.iter().sum::<u32>()
    }

    /// Applies one action per agent, in agent order, then advances the step.
    pub fn apply_actions(&mut self, joint: &[Action]) -> Result<Vec<Outcome>, SimError> {
        if joint.len() != self.agents.len() {
            return Err(SimError::JointAction { expected: self.agents.len(), got: joint.len() });
        }
        let mut out = Vec::with_capacity(joint.len());
        for (i, &submitted) in joint.iter().enumerate() {
            self.stats.actions += 1;
            let executed = if self.rng.gen_bool(self.noise.action) {
                self.stats.replaced += 1;
                Action::ALL[self.rng.gen_range(0..Action::ALL.len())]
            } else {
                submitted
            };
            let a = &self.agents[i];
            let p_fail = (self.noise.cargo * a.carried as f64 / a.capacity as f64).min(1.0);
            let success = if self.rng.gen_bool(p_fail) {
                self.stats.cargo_failures += 1;
                false
            } else {
                self.execute(i, executed)
            };
            out.push(Outcome { submitted, executed, success });
        }
        self.step += 1;
        Ok(out)
    }

    fn execute(&mut self, i: usize, action: Action) -> bool {
        let pos = self.agents[i].pos;
        match action {
            Action::Move(d) => {
                let target = pos.step(d);
                if self.is_free(target) {
                    self.agents[i].pos = target;
                    true
                } else {
                    false
                }
            }
            Action::Pick => {
                let a = &self.agents[i];
                let here = self.gold_at(pos);
                if here == 0 || a.carried >= a.capacity {
                    return false;
                }
                if here == 1 {
                    self.gold.remove(&pos);
                } else {
                    self.gold.insert(pos, here - 1);
                }
                self.agents[i].carried += 1;
                true
            }
            Action::Drop => {
                let a = &mut self.agents[i];
                if a.carried == 0 {
                    return false;
                }
                let n = std::mem::take(&mut a.carried);
                if self.depots[a.team] == pos {
                    self.scores[a.team] += n;
                } else {
                    *self.gold.entry(pos).or_default() += n;
                }
                true
            }
            Action::Skip => true,
        }
    }

    /// What agent `i` perceives now. Cell readings within the Moore radius are
    /// perturbed independently; position, cargo, capacity, depot and step are exact.
    pub fn perceive(&mut self, i: usize) -> Percept {
        let me = self.agents[i].clone();
        let mut literals = BTreeSet::new();
        let int = |v: i64| Term::int(v);
        let lit = |f: &str, args: Vec<Term>| Literal::new(Term::compound(f, args));
        literals.insert(lit("pos", vec![int(me.pos.x.into()), int(me.pos.y.into())]));
        literals.insert(lit("carrying", vec![int(me.carried.into())]));
        literals.insert(lit("capacity", vec![int(me.capacity.into())]));
        let depot = self.depots[me.team];
        literals.insert(lit("depot", vec![int(depot.x.into()), int(depot.y.into())]));
        literals.insert(lit("step", vec![int(self.step as i64)]));

        let r = self.radius as i32;
        for y in me.pos.y - r..=me.pos.y + r {
            for x in me.pos.x - r..=me.pos.x + r {
                let c = Cell::new(x, y);
                if !self.in_bounds(c) {
                    continue;
                }
                let xy = || vec![int(x.into()), int(y.into())];
                let g = self.read_gold(self.gold_at(c));
                if g > 0 {
                    let mut args = xy();
                    args.push(int(g.into()));
                    literals.insert(lit("gold", args));
                }
                let obstacle = self.is_obstacle(c);
                if self.read_flag(obstacle) {
                    literals.insert(lit("obstacle", xy()));
                }
                let other = self.agents.iter().enumerate().any(|(j, a)| j != i && a.pos == c);
                if self.read_flag(other) {
                    literals.insert(lit("agent", xy()));
                }
            }
        }
        Percept { literals }
    }

    fn perturb(&mut self) -> bool {
        self.stats.readings += 1;
        let hit = self.rng.gen_bool(self.noise.perception);
        if hit {
            self.stats.perturbed += 1;
        }
        hit
    }

    fn read_gold(&mut self, truth: u32) -> u32 {
        if self.perturb() {
            self.rng.gen_range(0..=2)
        } else {
            truth
        }
    }

    fn read_flag(&mut self, truth: bool) -> bool {
        truth ^ self.perturb()
    }

    /// Plain-text picture: `#` obstacle, `D`/`E`.. depots, digits gold,
    /// `a`/`b`.. agents by team (upper case when carrying).
    pub fn snapshot(&self) -> String {
        let mut s = String::new();
        let scores: Vec<String> = self.scores.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "step {} scores {}", self.step, scores.join(" "));
        for y in 0..self.height {
            for x in 0..self.width {
                let c = Cell::new(x, y);
                let ch = if let Some(i) = self.agent_at(c) {
                    let a = &self.agents[i];
                    let base = (b'a' + a.team as u8) as char;
                    if a.carried > 0 {
                        base.to_ascii_uppercase()
                    } else {
                        base
                    }
                } else if let Some(t) = self.depots.iter().position(|&d| d == c) {
                    (b'D' + t as u8) as char
                } else if self.is_obstacle(c) {
                    '#'
                } else {
                    match self.gold_at(c) {
                        0 => '.',
                        g @ 1..=9 => char::from_digit(g, 10).unwrap(),
                        _ => '+',
                    }
                };
                s.push(ch);
            }
            s.push('\n');
        }
        s
    }
}
