use asl::{BodyStep, Literal, Plan, Substitution, Trigger};

pub type IntentionId = u64;

/// Something the agent has to react to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub trigger: Trigger,
    /// The intention waiting on this event; `None` for external events.
    pub intention: Option<IntentionId>,
}

impl Event {
    pub fn external(trigger: Trigger) -> Self {
        Event { trigger, intention: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Performative {
    Tell,
    Achieve,
}

impl Performative {
    pub fn from_atom(s: &str) -> Option<Self> {
        match s {
            "tell" => Some(Performative::Tell),
            "achieve" => Some(Performative::Achieve),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Performative::Tell => "tell",
            Performative::Achieve => "achieve",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub sender: String,
    pub performative: Performative,
    pub content: Literal,
}

/// A message leaving an agent; `to == None` means every teammate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outgoing {
    pub to: Option<String>,
    pub message: Message,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    /// The event the plan was selected for, instantiated.
    pub trigger: Trigger,
    pub plan: Plan,
    pub subst: Substitution,
    pub cursor: usize,
}

impl Frame {
    pub fn current(&self) -> Option<&BodyStep> {
        self.plan.body.get(self.cursor)
    }

    pub fn is_done(&self) -> bool {
        self.cursor >= self.plan.body.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Active,
    /// Suspended until the environment reports the action outcome.
    AwaitingAction,
    /// Suspended on a posted subgoal or failure event.
    AwaitingSubgoal,
    /// Suspended by `.wait` until the given cycle.
    Waiting {
        until: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Intention {
    pub id: IntentionId,
    pub frames: Vec<Frame>,
    pub status: Status,
}

impl Intention {
    pub fn top(&self) -> Option<&Frame> {
        self.frames.last()
    }

    pub fn top_mut(&mut self) -> Option<&mut Frame> {
        self.frames.last_mut()
    }

    pub fn summary(&self) -> IntentionSummary {
        IntentionSummary {
            id: self.id,
            root: self.frames.first().map(|f| f.trigger.clone()),
            current: self.top().and_then(|f| f.current().map(|s| instantiate(s, &f.subst))),
        }
    }
}

/// Read-only description of an intention handed to selection strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntentionSummary {
    pub id: IntentionId,
    /// Trigger of the bottom frame; `None` only while a failure event is
    /// pending on an emptied stack.
    pub root: Option<Trigger>,
    pub current: Option<BodyStep>,
}

impl IntentionSummary {
    pub fn root_functor(&self) -> Option<&str> {
        self.root.as_ref().map(|t| t.literal.functor())
    }
}

fn instantiate(step: &BodyStep, s: &Substitution) -> BodyStep {
    match step {
        BodyStep::Action(l) => BodyStep::Action(s.apply_literal(l)),
        BodyStep::Achieve(l) => BodyStep::Achieve(s.apply_literal(l)),
        BodyStep::Test(l) => BodyStep::Test(s.apply_literal(l)),
        BodyStep::AddBelief(l) => BodyStep::AddBelief(s.apply_literal(l)),
        BodyStep::DelBelief(l) => BodyStep::DelBelief(s.apply_literal(l)),
        BodyStep::Internal { name, args } => {
            BodyStep::Internal { name: name.clone(), args: args.iter().map(|a| s.apply(a)).collect() }
        }
    }
}
