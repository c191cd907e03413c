//! Relevant and applicable plans.

use asl::{unify_literals, Condition, Plan, RelOp, Substitution, Term, Trigger};

use crate::beliefs::BeliefBase;

/// An applicable plan: a renamed-apart copy of a library plan plus the
/// substitution that unifies its trigger with the event and satisfies its context.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanOption {
    /// Position of the plan in the library.
    pub plan_index: usize,
    pub plan: Plan,
    pub subst: Substitution,
}

/// True when some plan's trigger unifies with `trigger`.
pub fn is_relevant(trigger: &Trigger, library: &[Plan]) -> bool {
    library.iter().any(|p| {
        p.trigger.same_shape(trigger)
            && unify_literals(&p.trigger.literal.rename(u64::MAX), &trigger.literal, &Substitution::new()).is_some()
    })
}

/// Applicable plans for `trigger`, in library order, each with its first
/// context solution. Plans are renamed apart with `tag`.
pub fn generate_options(trigger: &Trigger, beliefs: &BeliefBase, library: &[Plan], tag: u64) -> Vec<PlanOption> {
    let mut out = Vec::new();
    for (plan_index, plan) in library.iter().enumerate() {
        if !plan.trigger.same_shape(trigger) {
            continue;
        }
        let renamed = plan.rename(tag);
        let Some(s) = unify_literals(&renamed.trigger.literal, &trigger.literal, &Substitution::new()) else {
            continue;
        };
        if let Some(subst) = solve_context(&renamed.context, beliefs, s) {
            out.push(PlanOption { plan_index, plan: renamed, subst });
        }
    }
    out
}

/// First solution of a conjunction of conditions, depth-first over beliefs.
pub fn solve_context(context: &[Condition], beliefs: &BeliefBase, s: Substitution) -> Option<Substitution> {
    let Some((first, rest)) = context.split_first() else { return Some(s) };
    match first {
        Condition::Holds(l) => beliefs.query(l, &s).into_iter().find_map(|s2| solve_context(rest, beliefs, s2)),
        Condition::Not(l) => {
            if beliefs.first_match(l, &s).is_some() {
                None
            } else {
                solve_context(rest, beliefs, s)
            }
        }
        Condition::Rel(op, a, b) => {
            if compare(*op, &s.apply(a), &s.apply(b)) {
                solve_context(rest, beliefs, s)
            } else {
                None
            }
        }
    }
}

/// Relational test on instantiated terms. `==`/`\==` compare any ground
/// terms structurally; orderings need integers. Anything else is false.
pub fn compare(op: RelOp, a: &Term, b: &Term) -> bool {
    if !a.is_ground() || !b.is_ground() {
        return false;
    }
    match op {
        RelOp::Eq => a == b,
        RelOp::Ne => a != b,
        _ => match (a.as_int(), b.as_int()) {
            (Some(x), Some(y)) => match op {
                RelOp::Lt => x < y,
                RelOp::Le => x <= y,
                RelOp::Gt => x > y,
                RelOp::Ge => x >= y,
                RelOp::Eq | RelOp::Ne => unreachable!(),
            },
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beliefs::Source;
    use asl::{parse_literal, parse_program};

    fn beliefs(items: &[&str]) -> BeliefBase {
        let mut b = BeliefBase::new();
        for s in items {
            b.add(parse_literal(s).unwrap(), Source::Mental);
        }
        b
    }

    fn ev(s: &str) -> Trigger {
        Trigger::add_belief(parse_literal(s).unwrap())
    }

    #[test]
    fn no_relevant_plan() {
        let lib = parse_program("+h <- a.").unwrap().plans;
        assert!(generate_options(&ev("g"), &beliefs(&[]), &lib, 1).is_empty());
        assert!(!is_relevant(&ev("g"), &lib));
    }

    #[test]
    fn trigger_bindings() {
        let lib = parse_program("+gold(X,Y) : free <- !fetch(X,Y).").unwrap().plans;
        let opts = generate_options(&ev("gold(2,3)"), &beliefs(&["free"]), &lib, 7);
        assert_eq!(opts.len(), 1);
        assert_eq!(opts[0].subst.value_of("X#7"), Some(Term::int(2)));
        assert_eq!(opts[0].subst.value_of("Y#7"), Some(Term::int(3)));
        assert!(generate_options(&ev("gold(2,3)"), &beliefs(&[]), &lib, 7).is_empty());
    }

    #[test]
    fn only_plans_with_a_true_context() {
        let lib = parse_program("+e : a <- x. +e : b <- y. +e : not a <- z.").unwrap().plans;
        let opts = generate_options(&ev("e"), &beliefs(&["a"]), &lib, 1);
        assert_eq!(opts.iter().map(|o| o.plan_index).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn context_backtracks_over_beliefs() {
        let lib = parse_program("+e : at(X) & X > 2 & ok(X) <- go(X).").unwrap().plans;
        let b = beliefs(&["at(1)", "at(3)", "at(5)", "ok(5)"]);
        let opts = generate_options(&ev("e"), &b, &lib, 0);
        assert_eq!(opts[0].subst.value_of("X#0"), Some(Term::int(5)));
    }

    #[test]
    fn comparisons() {
        assert!(compare(RelOp::Lt, &Term::int(1), &Term::int(2)));
        assert!(!compare(RelOp::Lt, &Term::atom("a"), &Term::int(2)));
        assert!(compare(RelOp::Eq, &Term::atom("a"), &Term::atom("a")));
        assert!(compare(RelOp::Ne, &Term::atom("a"), &Term::atom("b")));
        assert!(!compare(RelOp::Eq, &Term::var("X"), &Term::var("X")));
    }
}
