use thiserror::Error;

use crate::action::Cell;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("grid must be at least 5x5, got {0}x{1}")]
    TooSmall(i32, i32),
    #[error("{what} at {cell} is outside the {width}x{height} grid")]
    OutOfBounds { what: &'static str, cell: Cell, width: i32, height: i32 },
    #[error("{what} at {cell} overlaps {other}")]
    Overlap { what: &'static str, other: &'static str, cell: Cell },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("joint action has {got} entries for {expected} agents")]
    JointAction { expected: usize, got: usize },
}
