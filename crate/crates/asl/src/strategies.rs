//! proptest strategies for terms and programs.

use proptest::collection::vec;
use proptest::prelude::*;

use crate::ast::{AgentProgram, BodyStep, Condition, Plan, RelOp, Trigger, TriggerKind, TriggerOp};
use crate::term::{Literal, Term};

const ATOMS: &[&str] = &["a", "b", "gold", "pos", "carrying", "bid", "f", "g", "depot_at", "x1"];
const VARS: &[&str] = &["X", "Y", "Z", "Cost", "M", "_Tmp"];
const ACTIONS: &[&str] = &["print", "send", "broadcast", "my_name", "wait", "next_step", "distance"];

pub fn atom_name() -> impl Strategy<Value = String> {
    prop::sample::select(ATOMS).prop_map(str::to_owned)
}

pub fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(VARS).prop_map(str::to_owned)
}

/// Terms up to the given depth; `with_vars` controls whether variables appear.
pub fn term(depth: u32, with_vars: bool) -> BoxedStrategy<Term> {
    let leaf = if with_vars {
        prop_oneof![atom_name().prop_map(Term::Atom), var_name().prop_map(Term::Var), (-50i64..50).prop_map(Term::Int),]
            .boxed()
    } else {
        prop_oneof![atom_name().prop_map(Term::Atom), (-50i64..50).prop_map(Term::Int)].boxed()
    };
    leaf.prop_recursive(depth, 24, 3, move |inner| {
        prop_oneof![
            (atom_name(), vec(inner.clone(), 1..4)).prop_map(|(f, args)| Term::Compound { functor: f, args }),
            vec(inner, 0..3).prop_map(Term::List),
        ]
    })
    .boxed()
}

pub fn literal(with_vars: bool) -> BoxedStrategy<Literal> {
    (any::<bool>(), atom_name(), vec(term(2, with_vars), 0..3))
        .prop_map(|(negated, f, args)| Literal { negated, term: Term::compound(f, args) })
        .boxed()
}

fn relop() -> impl Strategy<Value = RelOp> {
    prop::sample::select(vec![RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge])
}

fn condition() -> impl Strategy<Value = Condition> {
    prop_oneof![
        literal(true).prop_map(Condition::Holds),
        literal(true).prop_map(Condition::Not),
        (relop(), term(1, true), term(1, true)).prop_map(|(op, a, b)| Condition::Rel(op, a, b)),
    ]
}

fn step() -> impl Strategy<Value = BodyStep> {
    prop_oneof![
        literal(true).prop_map(BodyStep::Action),
        literal(true).prop_map(BodyStep::Achieve),
        literal(true).prop_map(BodyStep::Test),
        literal(true).prop_map(BodyStep::AddBelief),
        literal(true).prop_map(BodyStep::DelBelief),
        (prop::sample::select(ACTIONS), vec(term(1, true), 0..3))
            .prop_map(|(n, args)| BodyStep::Internal { name: n.to_owned(), args }),
    ]
}

fn trigger() -> impl Strategy<Value = Trigger> {
    (
        prop::sample::select(vec![TriggerOp::Add, TriggerOp::Delete]),
        prop::sample::select(vec![TriggerKind::Belief, TriggerKind::Achieve, TriggerKind::Test]),
        literal(true),
    )
        .prop_map(|(op, kind, literal)| Trigger { op, kind, literal })
}

pub fn plan() -> impl Strategy<Value = Plan> {
    (prop::option::of(atom_name()), trigger(), vec(condition(), 0..4), vec(step(), 0..5))
        .prop_map(|(label, trigger, context, body)| Plan { label, trigger, context, body })
}

pub fn program() -> impl Strategy<Value = AgentProgram> {
    (vec(literal(false), 0..4), vec(literal(true), 0..2), vec(plan(), 0..6))
        .prop_map(|(beliefs, goals, plans)| AgentProgram { beliefs, goals, plans })
}
