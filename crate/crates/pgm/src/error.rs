use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PgmError {
    #[error("variable `{0}` has mismatched domains in the two factors")]
    DomainMismatch(String),
    #[error("variable `{0}` is not in the factor scope")]
    NotInScope(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("state `{state}` is not in the domain of `{variable}`")]
    UnknownState { variable: String, state: String },
    #[error("invalid variable `{0}`: {1}")]
    InvalidVariable(String, String),
    #[error("table for `{scope}` has {got} entries, expected {expected}")]
    TableSize { scope: String, expected: usize, got: usize },
    #[error("table for `{0}` contains a negative or non-finite entry")]
    InvalidEntry(String),
    #[error("CPD of `{variable}` is not normalized for parent row {row} (sum {sum})")]
    NotNormalized { variable: String, row: usize, sum: f64 },
    #[error("the edge relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("evidence has zero probability")]
    InconsistentEvidence,
    #[error("CPD of `{0}` is undefined: no data and no smoothing")]
    UndefinedCpd(String),
    #[error("dataset record {0} does not assign every variable")]
    IncompleteRecord(usize),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("model file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, PgmError>;
