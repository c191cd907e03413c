use crate::beliefs::BeliefBase;
use crate::intention::{Event, IntentionSummary, Message};
use crate::options::PlanOption;

/// Read-only snapshot handed to selection functions.
#[derive(Clone, Copy, Debug)]
pub struct AgentView<'a> {
    pub name: &'a str,
    pub beliefs: &'a BeliefBase,
    /// Every live intention, in rotation order.
    pub intentions: &'a [IntentionSummary],
    pub cycle: u64,
}

/// The four choice points of the reasoning cycle. Each returns an index into
/// a non-empty slice; the engine rejects out-of-range answers.
///
/// The defaults are the standard ones: FIFO events and messages, first
/// applicable plan, and the front of the intention rotation (round-robin,
/// since the engine moves the executed intention to the back).
pub trait SelectionStrategy {
    fn select_event(&mut self, _events: &[Event], _view: &AgentView) -> usize {
        0
    }

    fn select_option(&mut self, _options: &[PlanOption], _view: &AgentView) -> usize {
        0
    }

    /// `active` is the runnable subset of `view.intentions`, in rotation order.
    fn select_intention(&mut self, _active: &[IntentionSummary], _view: &AgentView) -> usize {
        0
    }

    fn select_message(&mut self, _inbox: &[Message], _view: &AgentView) -> usize {
        0
    }

    fn name(&self) -> &str {
        "rr"
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RoundRobin;

impl SelectionStrategy for RoundRobin {}
