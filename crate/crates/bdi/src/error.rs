use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("agent {agent}: select_{choice} returned index {index} for {len} candidates")]
    StrategyFault { agent: String, choice: &'static str, index: usize, len: usize },
    #[error("agent {0}: action outcome reported but no action is pending")]
    NoPendingAction(String),
}
