//! Environment-provided internal actions: `.next_step`, `.distance` and
//! `.sweep_target`.

use std::collections::BTreeSet;

use asl::{Literal, Term};
use bdi::Host;
use miners_sim::nav::sweep_waypoints;
use miners_sim::{Cell, GridWorld, NavStep, Navigator, Region, Sweep};

/// Per-agent navigation state kept across steps.
#[derive(Clone, Debug, Default)]
pub struct AgentNav {
    navigator: Navigator,
    sweep: Option<Sweep>,
    last_waypoint: Option<Cell>,
    stuck_on: Option<Cell>,
}

pub struct WorldHost<'a> {
    pub world: &'a GridWorld,
    /// Index of the calling agent in the world.
    pub me: usize,
    /// Position of the agent among its team's miners; picks its sweep start.
    pub ordinal: usize,
    /// Number of miners in the team.
    pub miners: usize,
    pub nav: &'a mut AgentNav,
    /// Cells the agent currently perceives as blocked.
    pub blocked: &'a BTreeSet<Cell>,
}

/// Obstacle and agent cells named in a percept.
pub fn blocked_cells(percept: &BTreeSet<Literal>) -> BTreeSet<Cell> {
    percept
        .iter()
        .filter(|l| !l.negated && matches!(l.functor(), "obstacle" | "agent") && l.arity() == 2)
        .filter_map(|l| cell_of(&l.args()[0], &l.args()[1]))
        .collect()
}

fn cell_of(x: &Term, y: &Term) -> Option<Cell> {
    Some(Cell::new(x.as_int()?.try_into().ok()?, y.as_int()?.try_into().ok()?))
}

fn int(v: i32) -> Term {
    Term::int(v.into())
}

impl WorldHost<'_> {
    fn next_step(&mut self, target: Cell) -> NavStep {
        let w = self.world;
        let pos = w.agents()[self.me].pos;
        let seen = self.blocked;
        let step = self.nav.navigator.next_step(pos, target, |c| !w.in_bounds(c) || seen.contains(&c));
        if step == NavStep::Stuck {
            self.nav.stuck_on = Some(target);
        }
        step
    }

    fn waypoints(&self, region: &str) -> Option<(Vec<Cell>, usize)> {
        let w = self.world;
        let (width, height) = (w.width(), w.height());
        match region {
            // whole grid in adjacent lanes, starting points spread by ordinal
            "all" => {
                let wps = sweep_waypoints(Region::all(width, height), 0, w.obstacles());
                let start = self.ordinal * wps.len() / self.miners.max(1);
                Some((wps, start))
            }
            // own quadrant first, then the others in order
            "quadrant" => {
                let mut wps = Vec::new();
                for k in 0..4 {
                    let q = Region::quadrant(width, height, self.ordinal + k);
                    wps.extend(sweep_waypoints(q, w.radius(), w.obstacles()));
                }
                Some((wps, 0))
            }
            _ => None,
        }
    }

    fn sweep_target(&mut self, region: &str) -> Option<Cell> {
        if self.nav.sweep.is_none() {
            let (wps, start) = self.waypoints(region)?;
            self.nav.sweep = Some(Sweep::new(wps, start));
        }
        let pos = self.world.agents()[self.me].pos;
        let gave_up = self.nav.last_waypoint.is_some() && self.nav.stuck_on == self.nav.last_waypoint;
        if gave_up {
            self.nav.stuck_on = None;
        }
        let t = self.nav.sweep.as_mut()?.target(pos, gave_up)?;
        self.nav.last_waypoint = Some(t);
        Some(t)
    }
}

impl Host for WorldHost<'_> {
    fn call(&mut self, _agent: &str, name: &str, args: &[Term]) -> Option<Vec<Term>> {
        match (name, args) {
            ("next_step", [x, y, _]) => {
                let target = cell_of(x, y)?;
                let d = self.next_step(target);
                Some(vec![x.clone(), y.clone(), Term::atom(d.name())])
            }
            ("distance", [x1, y1, x2, y2, _]) => {
                let a = cell_of(x1, y1)?;
                let b = cell_of(x2, y2)?;
                Some(vec![x1.clone(), y1.clone(), x2.clone(), y2.clone(), int(a.manhattan(b) as i32)])
            }
            ("sweep_target", [r, _, _]) => {
                let t = self.sweep_target(r.as_atom()?)?;
                Some(vec![r.clone(), int(t.x), int(t.y)])
            }
            _ => None,
        }
    }
}
