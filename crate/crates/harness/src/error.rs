use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad input: configs, programs, models. Exit code 1.
    #[error("{0}")]
    Invalid(String),
    /// Something broke while running. Exit code 2.
    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Invalid(_) => 1,
            HarnessError::Runtime(_) => 2,
        }
    }
}

impl From<miners_sim::SimError> for HarnessError {
    fn from(e: miners_sim::SimError) -> Self {
        HarnessError::Invalid(format!("scenario: {e}"))
    }
}

impl From<meu_select::MeuError> for HarnessError {
    fn from(e: meu_select::MeuError) -> Self {
        HarnessError::Invalid(format!("model: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
