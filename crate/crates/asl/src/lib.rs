//! Front end for the AgentSpeak(L) subset used by the miners agents:
//! terms and unification, the program AST, a parser with positioned
//! diagnostics, a canonical printer and a small lint pass.

pub mod ast;
mod error;
mod lexer;
pub mod lint;
mod parser;
pub mod term;

pub use ast::{AgentProgram, BodyStep, Condition, Plan, RelOp, Trigger, TriggerKind, TriggerOp, INTERNAL_ACTIONS};
pub use error::ParseError;
pub use parser::{parse_literal, parse_program, parse_term};
pub use term::{unify, unify_literals, Literal, Substitution, Term};

/// Canonical text for `program`; re-parses to an equal AST.
pub fn print_program(program: &AgentProgram) -> String {
    program.to_string()
}

#[cfg(feature = "strategies")]
pub mod strategies;
