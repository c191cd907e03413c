use std::fmt;

use asl::{Literal, Term};

/// Grid coordinates; `y` grows downwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn step(self, d: Direction) -> Cell {
        let (dx, dy) = d.delta();
        Cell { x: self.x + dx, y: self.y + dy }
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// Moore (chessboard) distance.
    pub fn chebyshev(self, other: Cell) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (0, -1),
            Direction::Down => (0, 1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.name() == s)
    }

    /// Clockwise quarter turn.
    pub fn right(self) -> Direction {
        match self {
            Direction::Up => Direction::Right,
            Direction::Right => Direction::Down,
            Direction::Down => Direction::Left,
            Direction::Left => Direction::Up,
        }
    }

    pub fn left(self) -> Direction {
        self.right().right().right()
    }

    pub fn back(self) -> Direction {
        self.right().right()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Move(Direction),
    Pick,
    Drop,
    Skip,
}

impl Action {
    /// The seven-action space sampled by action noise.
    pub const ALL: [Action; 7] = [
        Action::Move(Direction::Up),
        Action::Move(Direction::Down),
        Action::Move(Direction::Left),
        Action::Move(Direction::Right),
        Action::Pick,
        Action::Drop,
        Action::Skip,
    ];

    /// `move(D)`, `pick`, `drop` or `skip`.
    pub fn from_literal(l: &Literal) -> Option<Action> {
        if l.negated {
            return None;
        }
        match (l.functor(), l.args()) {
            ("move", [d]) => d.as_atom().and_then(Direction::parse).map(Action::Move),
            ("pick", []) => Some(Action::Pick),
            ("drop", []) => Some(Action::Drop),
            ("skip", []) => Some(Action::Skip),
            _ => None,
        }
    }

    pub fn to_literal(self) -> Literal {
        match self {
            Action::Move(d) => Literal::new(Term::compound("move", vec![Term::atom(d.name())])),
            Action::Pick => Literal::new(Term::atom("pick")),
            Action::Drop => Literal::new(Term::atom("drop")),
            Action::Skip => Literal::new(Term::atom("skip")),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        for a in Action::ALL {
            assert_eq!(Action::from_literal(&a.to_literal()), Some(a));
        }
        assert_eq!(Action::from_literal(&asl::parse_literal("move(north)").unwrap()), None);
        assert_eq!(Action::from_literal(&asl::parse_literal("dance").unwrap()), None);
    }

    #[test]
    fn turns() {
        for d in Direction::ALL {
            assert_eq!(d.left().right(), d);
            assert_eq!(Cell::new(3, 3).step(d).step(d.back()), Cell::new(3, 3));
        }
        assert_eq!(Cell::new(0, 0).step(Direction::Up), Cell::new(0, -1));
    }
}
