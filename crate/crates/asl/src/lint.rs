//! Static checks that produce warnings rather than errors.

use std::collections::BTreeSet;

use crate::ast::{BodyStep, Condition, Plan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintWarning {
    /// Index of the plan in the program.
    pub plan: usize,
    pub message: String,
}

/// Flags body variables that nothing binds before use.
///
/// Trigger and context variables are bound by option generation. In the body,
/// test goals, subgoals and internal actions may bind fresh variables; a
/// variable whose first occurrence is an environment action, a belief update
/// or a relational test is reported.
pub fn unbound_body_variables(index: usize, plan: &Plan) -> Vec<LintWarning> {
    let mut bound: BTreeSet<String> = BTreeSet::new();
    let mut vars = Vec::new();
    plan.trigger.literal.term.collect_vars(&mut vars);
    for c in &plan.context {
        match c {
            Condition::Holds(l) => l.term.collect_vars(&mut vars),
            // Negated literals and comparisons never bind.
            Condition::Not(_) | Condition::Rel(..) => {}
        }
    }
    bound.extend(vars.into_iter().map(str::to_owned));

    let mut warnings = Vec::new();
    for step in &plan.body {
        let mut vars = Vec::new();
        let binds = match step {
            BodyStep::Test(l) | BodyStep::Achieve(l) | BodyStep::DelBelief(l) => {
                l.term.collect_vars(&mut vars);
                true
            }
            BodyStep::Internal { args, .. } => {
                args.iter().for_each(|a| a.collect_vars(&mut vars));
                true
            }
            BodyStep::Action(l) | BodyStep::AddBelief(l) => {
                l.term.collect_vars(&mut vars);
                false
            }
        };
        for v in vars {
            if v.starts_with("__") || bound.contains(v) {
                continue;
            }
            if binds {
                bound.insert(v.to_owned());
            } else {
                warnings.push(LintWarning {
                    plan: index,
                    message: format!("variable `{v}` in `{step}` is never bound in `{}`", plan.trigger),
                });
            }
        }
    }
    warnings
}

pub fn lint_program(program: &crate::ast::AgentProgram) -> Vec<LintWarning> {
    program.plans.iter().enumerate().flat_map(|(i, p)| unbound_body_variables(i, p)).collect()
}
