//! BDI reasoning cycle over AgentSpeak(L) programs: belief revision, event,
//! option and intention selection through a pluggable strategy, intention
//! stacks with goal-failure handling, and message passing.

mod agent;
pub mod beliefs;
mod error;
pub mod intention;
pub mod options;
pub mod strategy;

pub use agent::{Agent, CycleReport, Host, NoHost, Stats};
pub use beliefs::{brf, BeliefBase, Source};
pub use error::RuntimeError;
pub use intention::{Event, Frame, Intention, IntentionId, IntentionSummary, Message, Outgoing, Performative, Status};
pub use options::{generate_options, is_relevant, solve_context, PlanOption};
pub use strategy::{AgentView, RoundRobin, SelectionStrategy};
