//! Terms, literals, substitutions and most-general unification.

use std::collections::BTreeMap;
use std::fmt;

/// A first-order term of the agent language.
///
/// The derived ordering is the standard order used wherever the runtime needs
/// a deterministic sort (belief queries, event ordering, `.min`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(String),
    Var(String),
    Int(i64),
    Compound { functor: String, args: Vec<Term> },
    List(Vec<Term>),
}

impl Term {
    pub fn atom(name: impl Into<String>) -> Self {
        Term::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn int(value: i64) -> Self {
        Term::Int(value)
    }

    /// Builds `functor(args..)`, collapsing to an atom when `args` is empty.
    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Self {
        let functor = functor.into();
        if args.is_empty() {
            Term::Atom(functor)
        } else {
            Term::Compound { functor, args }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Int(_) => true,
            Term::Compound { args, .. } | Term::List(args) => args.iter().all(Term::is_ground),
        }
    }

    /// Functor name and arity for atoms and compounds.
    pub fn signature(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(name) => Some((name, 0)),
            Term::Compound { functor, args } => Some((functor, args.len())),
            _ => None,
        }
    }

    /// Arguments of a compound; empty for every other shape.
    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound { args, .. } => args,
            _ => &[],
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Appends every variable name (with repetition) in left-to-right order.
    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Atom(_) | Term::Int(_) => {}
            Term::Compound { args, .. } | Term::List(args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Atom(_) | Term::Int(_) => false,
            Term::Compound { args, .. } | Term::List(args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// Renames every variable by appending `#tag`.
    pub fn rename(&self, tag: u64) -> Term {
        match self {
            Term::Var(v) => Term::Var(format!("{v}#{tag}")),
            Term::Atom(_) | Term::Int(_) => self.clone(),
            Term::Compound { functor, args } => {
                Term::Compound { functor: functor.clone(), args: args.iter().map(|a| a.rename(tag)).collect() }
            }
            Term::List(items) => Term::List(items.iter().map(|a| a.rename(tag)).collect()),
        }
    }
}

/// A possibly strongly-negated atomic formula (`p(..)` or `~p(..)`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub negated: bool,
    pub term: Term,
}

impl Literal {
    /// Panics if `term` is not an atom or compound; use [`Literal::try_new`]
    /// for untrusted input.
    pub fn new(term: Term) -> Self {
        Self::try_new(false, term).expect("literal must be an atom or compound")
    }

    pub fn try_new(negated: bool, term: Term) -> Option<Self> {
        term.signature()?;
        Some(Literal { negated, term })
    }

    pub fn functor(&self) -> &str {
        self.term.signature().map(|(f, _)| f).unwrap_or_default()
    }

    pub fn arity(&self) -> usize {
        self.term.args().len()
    }

    pub fn args(&self) -> &[Term] {
        self.term.args()
    }

    pub fn is_ground(&self) -> bool {
        self.term.is_ground()
    }

    pub fn rename(&self, tag: u64) -> Literal {
        Literal { negated: self.negated, term: self.term.rename(tag) }
    }
}

/// Finite map from variable names to terms, kept in triangular form.
///
/// [`Substitution::apply`] resolves bindings transitively, so the observable
/// mapping is idempotent even though stored bindings may mention other bound
/// variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    /// Fully resolved value of `var`, if bound.
    pub fn value_of(&self, var: &str) -> Option<Term> {
        self.bindings.get(var).map(|t| self.apply(t))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    /// Binds `var` without an occurs check. Callers must guarantee `term`,
    /// resolved under `self`, does not contain `var`.
    fn bind(&mut self, var: String, term: Term) {
        self.bindings.insert(var, term);
    }

    /// Follows variable chains until reaching an unbound variable or a
    /// non-variable term (shallow).
    fn walk<'a>(&'a self, mut term: &'a Term) -> &'a Term {
        while let Term::Var(v) = term {
            match self.bindings.get(v) {
                Some(next) => term = next,
                None => break,
            }
        }
        term
    }

    pub fn apply(&self, term: &Term) -> Term {
        match self.walk(term) {
            Term::Compound { functor, args } => {
                Term::Compound { functor: functor.clone(), args: args.iter().map(|a| self.apply(a)).collect() }
            }
            Term::List(items) => Term::List(items.iter().map(|a| self.apply(a)).collect()),
            other => other.clone(),
        }
    }

    pub fn apply_literal(&self, lit: &Literal) -> Literal {
        Literal { negated: lit.negated, term: self.apply(&lit.term) }
    }

    /// The idempotent form: every binding fully resolved.
    pub fn resolved(&self) -> Substitution {
        Substitution {
            bindings: self.bindings.keys().map(|k| (k.clone(), self.apply(&Term::Var(k.clone())))).collect(),
        }
    }

    fn occurs(&self, var: &str, term: &Term) -> bool {
        match self.walk(term) {
            Term::Var(v) => v == var,
            Term::Atom(_) | Term::Int(_) => false,
            Term::Compound { args, .. } | Term::List(args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }

    fn unify_in_place(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if self.occurs(x, other) {
                    return false;
                }
                self.bind(x.clone(), other.clone());
                true
            }
            (Term::Atom(x), Term::Atom(y)) => x == y,
            (Term::Int(x), Term::Int(y)) => x == y,
            (Term::Compound { functor: f, args: xs }, Term::Compound { functor: g, args: ys }) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_in_place(x, y))
            }
            (Term::List(xs), Term::List(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_in_place(x, y))
            }
            _ => false,
        }
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution { bindings: iter.into_iter().collect() }
    }
}

/// Most general unifier of `a` and `b` extending `s`, with occurs check.
/// Returns `None` on a clash or an occurs-check failure.
pub fn unify(a: &Term, b: &Term, s: &Substitution) -> Option<Substitution> {
    let mut out = s.clone();
    out.unify_in_place(a, b).then_some(out)
}

/// Unifies two literals: polarity must match, then the terms must unify.
pub fn unify_literals(a: &Literal, b: &Literal, s: &Substitution) -> Option<Substitution> {
    if a.negated != b.negated {
        return None;
    }
    unify(&a.term, &b.term, s)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => f.write_str(a),
            Term::Var(v) => f.write_str(v),
            Term::Int(i) => write!(f, "{i}"),
            Term::Compound { functor, args } => {
                write!(f, "{functor}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Term::List(items) => {
                f.write_str("[")?;
                write_list(f, items)?;
                f.write_str("]")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Term]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}", self.term)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}->{}", self.apply(v))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(f: &str, args: Vec<Term>) -> Term {
        Term::compound(f, args)
    }

    #[test]
    fn textbook_unifier() {
        let a = c("gold", vec![Term::var("X"), Term::int(3)]);
        let b = c("gold", vec![Term::int(2), Term::var("Y")]);
        let s = unify(&a, &b, &Substitution::new()).unwrap();
        assert_eq!(s.value_of("X"), Some(Term::int(2)));
        assert_eq!(s.value_of("Y"), Some(Term::int(3)));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn occurs_check_rejects_cyclic_binding() {
        let a = c("f", vec![Term::var("X")]);
        assert!(unify(&a, &Term::var("X"), &Substitution::new()).is_none());
    }

    #[test]
    fn shared_variable_propagates() {
        // f(X,X) = f(g(A), g(b))
        let a = c("f", vec![Term::var("X"), Term::var("X")]);
        let b = c("f", vec![c("g", vec![Term::var("A")]), c("g", vec![Term::atom("b")])]);
        let s = unify(&a, &b, &Substitution::new()).unwrap();
        assert_eq!(s.value_of("X"), Some(c("g", vec![Term::atom("b")])));
        assert_eq!(s.value_of("A"), Some(Term::atom("b")));
        assert_eq!(s.apply(&a), s.apply(&b));
    }

    #[test]
    fn clash_and_arity_mismatch() {
        let s = Substitution::new();
        assert!(unify(&Term::atom("a"), &Term::atom("b"), &s).is_none());
        assert!(unify(&Term::int(1), &Term::atom("a"), &s).is_none());
        let f1 = c("f", vec![Term::int(1)]);
        let f2 = c("f", vec![Term::int(1), Term::int(2)]);
        assert!(unify(&f1, &f2, &s).is_none());
    }

    #[test]
    fn result_extends_input() {
        let mut s = Substitution::new();
        s.bind("Z".into(), Term::int(9));
        let out = unify(&Term::var("X"), &Term::int(1), &s).unwrap();
        assert_eq!(out.value_of("Z"), Some(Term::int(9)));
        assert_eq!(out.value_of("X"), Some(Term::int(1)));
    }

    #[test]
    fn bound_variable_must_agree() {
        let s = unify(&Term::var("X"), &Term::int(1), &Substitution::new()).unwrap();
        assert!(unify(&Term::var("X"), &Term::int(2), &s).is_none());
        assert!(unify(&Term::var("X"), &Term::int(1), &s).is_some());
    }

    #[test]
    fn indirect_occurs_check() {
        // X = Y, then Y = f(X) must fail.
        let s = unify(&Term::var("X"), &Term::var("Y"), &Substitution::new()).unwrap();
        assert!(unify(&Term::var("Y"), &c("f", vec![Term::var("X")]), &s).is_none());
    }

    #[test]
    fn literal_polarity_matters() {
        let p = Literal::new(Term::atom("p"));
        let np = Literal { negated: true, term: Term::atom("p") };
        assert!(unify_literals(&p, &np, &Substitution::new()).is_none());
        assert!(unify_literals(&np, &np, &Substitution::new()).is_some());
    }

    #[test]
    fn lists_unify_elementwise() {
        let a = Term::List(vec![Term::var("H"), Term::int(2)]);
        let b = Term::List(vec![Term::int(1), Term::var("T")]);
        let s = unify(&a, &b, &Substitution::new()).unwrap();
        assert_eq!(s.apply(&a), Term::List(vec![Term::int(1), Term::int(2)]));
        assert!(unify(&a, &Term::List(vec![]), &Substitution::new()).is_none());
    }

    #[test]
    fn rename_is_apart() {
        let t = c("p", vec![Term::var("X"), Term::atom("a")]);
        let r = t.rename(7);
        assert_eq!(r, c("p", vec![Term::var("X#7"), Term::atom("a")]));
        assert!(!r.contains_var("X"));
    }
}
