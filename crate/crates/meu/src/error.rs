use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeuError {
    #[error(transparent)]
    Pgm(#[from] pgm::PgmError),
    #[error("diagram structure: {0}")]
    Structure(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("policy file: {0}")]
    Policy(String),
}

pub type Result<T> = std::result::Result<T, MeuError>;
