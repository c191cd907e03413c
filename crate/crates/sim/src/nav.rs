//! Local navigation: greedy descent with right-hand wall following, and
//! lawn-mower sweep waypoints.

use std::collections::{BTreeSet, VecDeque};

use crate::action::{Cell, Direction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NavStep {
    Move(Direction),
    /// Already on the target.
    Here,
    /// Step budget for this target exhausted.
    Stuck,
}

impl NavStep {
    pub fn name(self) -> &'static str {
        match self {
            NavStep::Move(d) => d.name(),
            NavStep::Here => "here",
            NavStep::Stuck => "stuck",
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Follow {
    heading: Direction,
    /// Distance to the target when the wall was hit.
    hit: u32,
}

/// Per-agent navigation state. One instance follows one target at a time;
/// asking for a different target resets it.
#[derive(Clone, Debug, Default)]
pub struct Navigator {
    target: Option<Cell>,
    used: u32,
    budget: u32,
    follow: Option<Follow>,
}

impl Navigator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn target(&self) -> Option<Cell> {
        self.target
    }

    /// Next move from `pos` towards `target`. `blocked` reports cells that
    /// cannot be entered (obstacles, other agents, off-grid).
    pub fn next_step(&mut self, pos: Cell, target: Cell, blocked: impl Fn(Cell) -> bool) -> NavStep {
        if pos == target {
            self.target = None;
            return NavStep::Here;
        }
        if self.target != Some(target) {
            self.target = Some(target);
            self.used = 0;
            self.budget = 3 * pos.manhattan(target) + 10;
            self.follow = None;
        }
        self.used += 1;
        if self.used > self.budget {
            self.target = None;
            return NavStep::Stuck;
        }
        let dist = pos.manhattan(target);
        let greedy = greedy_dirs(pos, target);
        if let Some(f) = self.follow {
            // leave the wall once strictly closer than where it was hit
            if dist < f.hit {
                if let Some(&d) = greedy.iter().find(|&&d| !blocked(pos.step(d))) {
                    self.follow = None;
                    return NavStep::Move(d);
                }
            }
            for d in [f.heading.right(), f.heading, f.heading.left(), f.heading.back()] {
                if !blocked(pos.step(d)) {
                    self.follow = Some(Follow { heading: d, ..f });
                    return NavStep::Move(d);
                }
            }
            return NavStep::Move(f.heading);
        }
        if let Some(&d) = greedy.iter().find(|&&d| !blocked(pos.step(d))) {
            return NavStep::Move(d);
        }
        // wall ahead: turn left until free, keeping it on the right
        let mut heading = greedy[0];
        for _ in 0..4 {
            heading = heading.left();
            if !blocked(pos.step(heading)) {
                self.follow = Some(Follow { heading, hit: dist });
                return NavStep::Move(heading);
            }
        }
        // boxed in; wait and let the budget decide
        NavStep::Move(greedy[0])
    }
}

/// Directions that reduce Manhattan distance, larger gap first.
fn greedy_dirs(pos: Cell, target: Cell) -> Vec<Direction> {
    let dx = target.x - pos.x;
    let dy = target.y - pos.y;
    let h = (dx != 0).then_some(if dx > 0 { Direction::Right } else { Direction::Left });
    let v = (dy != 0).then_some(if dy > 0 { Direction::Down } else { Direction::Up });
    let mut out: Vec<Direction> = if dx.abs() >= dy.abs() { [h, v] } else { [v, h] }.into_iter().flatten().collect();
    if out.is_empty() {
        out.push(Direction::Up);
    }
    out
}

/// Inclusive rectangle of cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl Region {
    pub fn all(width: i32, height: i32) -> Self {
        Region { x0: 0, y0: 0, x1: width - 1, y1: height - 1 }
    }

    /// Quadrant `i % 4`: top-left, top-right, bottom-left, bottom-right.
    pub fn quadrant(width: i32, height: i32, i: usize) -> Self {
        let (mx, my) = (width / 2, height / 2);
        match i % 4 {
            0 => Region { x0: 0, y0: 0, x1: mx - 1, y1: my - 1 },
            1 => Region { x0: mx, y0: 0, x1: width - 1, y1: my - 1 },
            2 => Region { x0: 0, y0: my, x1: mx - 1, y1: height - 1 },
            _ => Region { x0: mx, y0: my, x1: width - 1, y1: height - 1 },
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.x0 && c.x <= self.x1 && c.y >= self.y0 && c.y <= self.y1
    }
}

/// Boustrophedon waypoints covering `region` with a view of `radius`:
/// horizontal lanes `2r+1` apart, alternating direction. Endpoints on
/// obstacles are moved to the nearest free cell of the region.
pub fn sweep_waypoints(region: Region, radius: u32, obstacles: &BTreeSet<Cell>) -> Vec<Cell> {
    let stride = 2 * radius as i32 + 1;
    let r = radius as i32;
    let mut lanes = Vec::new();
    let mut y = (region.y0 + r).min(region.y1);
    loop {
        lanes.push(y);
        if y >= region.y1 - r {
            break;
        }
        y = (y + stride).min(region.y1 - r).max(y + 1);
    }
    let (left, right) = ((region.x0 + r).min(region.x1), (region.x1 - r).max(region.x0));
    let mut out = Vec::new();
    for (i, &y) in lanes.iter().enumerate() {
        let (a, b) = if i % 2 == 0 { (left, right) } else { (right, left) };
        for x in [a, b] {
            if let Some(c) = nearest_free(Cell::new(x, y), region, obstacles) {
                if out.last() != Some(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn nearest_free(start: Cell, region: Region, obstacles: &BTreeSet<Cell>) -> Option<Cell> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if !obstacles.contains(&c) {
            return Some(c);
        }
        for d in Direction::ALL {
            let n = c.step(d);
            if region.contains(n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    None
}

/// Cyclic cursor over sweep waypoints.
#[derive(Clone, Debug)]
pub struct Sweep {
    waypoints: Vec<Cell>,
    next: usize,
}

impl Sweep {
    /// Starts at waypoint `start` (wrapped).
    pub fn new(waypoints: Vec<Cell>, start: usize) -> Self {
        let next = if waypoints.is_empty() { 0 } else { start % waypoints.len() };
        Sweep { waypoints, next }
    }

    pub fn waypoints(&self) -> &[Cell] {
        &self.waypoints
    }

    /// Current waypoint, advancing first when `pos` is within one cell of it
    /// or the navigator gave up on it.
    pub fn target(&mut self, pos: Cell, gave_up: bool) -> Option<Cell> {
        if self.waypoints.is_empty() {
            return None;
        }
        let n = self.waypoints.len();
        if gave_up {
            self.next = (self.next + 1) % n;
        }
        for _ in 0..n {
            if pos.manhattan(self.waypoints[self.next]) > 1 {
                break;
            }
            self.next = (self.next + 1) % n;
        }
        Some(self.waypoints[self.next])
    }
}
