//! Program structure: triggers, plans, contexts and bodies.

use std::fmt;

use crate::term::{Literal, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriggerOp {
    Add,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriggerKind {
    Belief,
    Achieve,
    Test,
}

/// `+b`, `-b`, `+!g`, `-!g`, `+?g`, `-?g`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trigger {
    pub op: TriggerOp,
    pub kind: TriggerKind,
    pub literal: Literal,
}

impl Trigger {
    pub fn new(op: TriggerOp, kind: TriggerKind, literal: Literal) -> Self {
        Trigger { op, kind, literal }
    }

    pub fn add_belief(literal: Literal) -> Self {
        Self::new(TriggerOp::Add, TriggerKind::Belief, literal)
    }

    pub fn del_belief(literal: Literal) -> Self {
        Self::new(TriggerOp::Delete, TriggerKind::Belief, literal)
    }

    pub fn achieve(literal: Literal) -> Self {
        Self::new(TriggerOp::Add, TriggerKind::Achieve, literal)
    }

    /// True when op and kind agree, i.e. the literals are worth unifying.
    pub fn same_shape(&self, other: &Trigger) -> bool {
        self.op == other.op
            && self.kind == other.kind
            && self.literal.negated == other.literal.negated
            && self.literal.functor() == other.literal.functor()
            && self.literal.arity() == other.literal.arity()
    }

    pub fn rename(&self, tag: u64) -> Trigger {
        Trigger { op: self.op, kind: self.kind, literal: self.literal.rename(tag) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "==",
            RelOp::Ne => "\\==",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        }
    }
}

/// One conjunct of a plan context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Holds(Literal),
    /// Negation as failure against the belief base.
    Not(Literal),
    Rel(RelOp, Term, Term),
}

impl Condition {
    pub fn rename(&self, tag: u64) -> Condition {
        match self {
            Condition::Holds(l) => Condition::Holds(l.rename(tag)),
            Condition::Not(l) => Condition::Not(l.rename(tag)),
            Condition::Rel(op, a, b) => Condition::Rel(*op, a.rename(tag), b.rename(tag)),
        }
    }
}

/// Internal actions understood by the runtime and its environment bindings.
pub const INTERNAL_ACTIONS: &[&str] =
    &["print", "send", "broadcast", "my_name", "wait", "findall", "min", "next_step", "distance", "sweep_target"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyStep {
    Action(Literal),
    Achieve(Literal),
    Test(Literal),
    AddBelief(Literal),
    DelBelief(Literal),
    Internal { name: String, args: Vec<Term> },
}

impl BodyStep {
    pub fn rename(&self, tag: u64) -> BodyStep {
        match self {
            BodyStep::Action(l) => BodyStep::Action(l.rename(tag)),
            BodyStep::Achieve(l) => BodyStep::Achieve(l.rename(tag)),
            BodyStep::Test(l) => BodyStep::Test(l.rename(tag)),
            BodyStep::AddBelief(l) => BodyStep::AddBelief(l.rename(tag)),
            BodyStep::DelBelief(l) => BodyStep::DelBelief(l.rename(tag)),
            BodyStep::Internal { name, args } => {
                BodyStep::Internal { name: name.clone(), args: args.iter().map(|a| a.rename(tag)).collect() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plan {
    pub label: Option<String>,
    pub trigger: Trigger,
    /// Empty means `true`.
    pub context: Vec<Condition>,
    /// Empty means `true`.
    pub body: Vec<BodyStep>,
}

impl Plan {
    /// A copy with every variable renamed apart using `tag`.
    pub fn rename(&self, tag: u64) -> Plan {
        Plan {
            label: self.label.clone(),
            trigger: self.trigger.rename(tag),
            context: self.context.iter().map(|c| c.rename(tag)).collect(),
            body: self.body.iter().map(|b| b.rename(tag)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgentProgram {
    /// Ground initial beliefs.
    pub beliefs: Vec<Literal>,
    /// Initial achievement goals (`!g.`).
    pub goals: Vec<Literal>,
    pub plans: Vec<Plan>,
}

impl AgentProgram {
    /// Concatenates programs; plan order is preserved, earlier programs first.
    pub fn merge(parts: impl IntoIterator<Item = AgentProgram>) -> AgentProgram {
        let mut out = AgentProgram::default();
        for p in parts {
            out.beliefs.extend(p.beliefs);
            out.goals.extend(p.goals);
            out.plans.extend(p.plans);
        }
        out
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.op {
            TriggerOp::Add => "+",
            TriggerOp::Delete => "-",
        })?;
        f.write_str(match self.kind {
            TriggerKind::Belief => "",
            TriggerKind::Achieve => "!",
            TriggerKind::Test => "?",
        })?;
        write!(f, "{}", self.literal)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Holds(l) => write!(f, "{l}"),
            Condition::Not(l) => write!(f, "not {l}"),
            Condition::Rel(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
        }
    }
}

impl fmt::Display for BodyStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyStep::Action(l) => write!(f, "{l}"),
            BodyStep::Achieve(l) => write!(f, "!{l}"),
            BodyStep::Test(l) => write!(f, "?{l}"),
            BodyStep::AddBelief(l) => write!(f, "+{l}"),
            BodyStep::DelBelief(l) => write!(f, "-{l}"),
            BodyStep::Internal { name, args } => {
                write!(f, ".{name}")?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "@{label} ")?;
        }
        write!(f, "{}", self.trigger)?;
        if !self.context.is_empty() {
            f.write_str(" : ")?;
            for (i, c) in self.context.iter().enumerate() {
                if i > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{c}")?;
            }
        }
        if !self.body.is_empty() {
            f.write_str(" <- ")?;
            for (i, s) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{s}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for AgentProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.beliefs {
            writeln!(f, "{b}.")?;
        }
        for g in &self.goals {
            writeln!(f, "!{g}.")?;
        }
        for p in &self.plans {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}
