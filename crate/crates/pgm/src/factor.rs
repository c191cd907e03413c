//! Discrete variables and table factors.
//!
//! Tables are row-major in scope order: the last variable of the scope
//! varies fastest.

use std::collections::BTreeSet;

use crate::error::{PgmError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteVariable {
    name: String,
    states: Vec<String>,
}

impl DiscreteVariable {
    pub fn new(name: impl Into<String>, states: Vec<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(PgmError::InvalidVariable(name, "empty name".into()));
        }
        if states.len() < 2 {
            return Err(PgmError::InvalidVariable(name, "domain needs at least two states".into()));
        }
        let unique: BTreeSet<&String> = states.iter().collect();
        if unique.len() != states.len() {
            return Err(PgmError::InvalidVariable(name, "duplicate state label".into()));
        }
        Ok(DiscreteVariable { name, states })
    }

    /// Convenience constructor from string slices.
    pub fn with_states(name: &str, states: &[&str]) -> Result<Self> {
        Self::new(name, states.iter().map(|s| s.to_string()).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, state: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| PgmError::UnknownState { variable: self.name.clone(), state: state.to_owned() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<DiscreteVariable>,
    table: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<DiscreteVariable>, table: Vec<f64>) -> Result<Self> {
        let names: BTreeSet<&str> = scope.iter().map(|v| v.name()).collect();
        if names.len() != scope.len() {
            return Err(PgmError::Structure("factor scope repeats a variable".into()));
        }
        let expected: usize = scope.iter().map(DiscreteVariable::cardinality).product();
        let label = || scope.iter().map(|v| v.name()).collect::<Vec<_>>().join(",");
        if table.len() != expected {
            return Err(PgmError::TableSize { scope: label(), expected, got: table.len() });
        }
        if table.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(PgmError::InvalidEntry(label()));
        }
        Ok(Factor { scope, table })
    }

    /// The multiplicative identity: empty scope, single entry 1.
    pub fn identity() -> Self {
        Factor { scope: Vec::new(), table: vec![1.0] }
    }

    pub fn scope(&self) -> &[DiscreteVariable] {
        &self.scope
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.scope.iter().position(|v| v.name() == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    fn strides(&self) -> Vec<usize> {
        strides_of(&self.scope)
    }

    /// Row-major index of a full assignment (state indices in scope order).
    pub fn index_of(&self, assignment: &[usize]) -> usize {
        debug_assert_eq!(assignment.len(), self.scope.len());
        assignment.iter().zip(self.strides()).map(|(a, s)| a * s).sum()
    }

    pub fn value(&self, assignment: &[usize]) -> f64 {
        self.table[self.index_of(assignment)]
    }

    /// Scalar value of an empty-scope factor.
    pub fn scalar(&self) -> Option<f64> {
        self.scope.is_empty().then(|| self.table[0])
    }

    pub fn sum(&self) -> f64 {
        self.table.iter().sum()
    }

    pub fn multiply(&self, other: &Factor) -> Result<Factor> {
        let mut scope = self.scope.clone();
        for v in &other.scope {
            match self.position(v.name()) {
                Some(i) if self.scope[i] != *v => return Err(PgmError::DomainMismatch(v.name().to_owned())),
                Some(_) => {}
                None => scope.push(v.clone()),
            }
        }
        let map_self: Vec<usize> = self.scope.iter().map(|v| position_in(&scope, v.name())).collect();
        let map_other: Vec<usize> = other.scope.iter().map(|v| position_in(&scope, v.name())).collect();
        let (ss, so) = (self.strides(), other.strides());
        let size: usize = scope.iter().map(DiscreteVariable::cardinality).product();
        let mut table = Vec::with_capacity(size);
        for assignment in Assignments::new(&scope) {
            let i: usize = map_self.iter().zip(&ss).map(|(&p, s)| assignment[p] * s).sum();
            let j: usize = map_other.iter().zip(&so).map(|(&p, s)| assignment[p] * s).sum();
            table.push(self.table[i] * other.table[j]);
        }
        Ok(Factor { scope, table })
    }

    /// Sums `name` out of the factor.
    pub fn marginalize(&self, name: &str) -> Result<Factor> {
        let k = self.position(name).ok_or_else(|| PgmError::NotInScope(name.to_owned()))?;
        let mut scope = self.scope.clone();
        scope.remove(k);
        let out_strides = strides_of(&scope);
        let size: usize = scope.iter().map(DiscreteVariable::cardinality).product();
        let mut table = vec![0.0; size];
        for (idx, assignment) in Assignments::new(&self.scope).enumerate() {
            let j: usize = assignment
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != k)
                .map(|(_, a)| a)
                .zip(&out_strides)
                .map(|(a, s)| a * s)
                .sum();
            table[j] += self.table[idx];
        }
        Ok(Factor { scope, table })
    }

    /// Restricts `name` to `state`, removing it from the scope.
    pub fn reduce(&self, name: &str, state: usize) -> Result<Factor> {
        let k = self.position(name).ok_or_else(|| PgmError::NotInScope(name.to_owned()))?;
        if state >= self.scope[k].cardinality() {
            return Err(PgmError::UnknownState { variable: name.to_owned(), state: state.to_string() });
        }
        let mut scope = self.scope.clone();
        scope.remove(k);
        let table = Assignments::new(&self.scope)
            .enumerate()
            .filter(|(_, a)| a[k] == state)
            .map(|(idx, _)| self.table[idx])
            .collect();
        Ok(Factor { scope, table })
    }

    /// Divides every entry by the total. Fails on an all-zero table.
    pub fn normalize(&self) -> Result<Factor> {
        let total = self.sum();
        if total <= 0.0 {
            return Err(PgmError::InconsistentEvidence);
        }
        Ok(Factor { scope: self.scope.clone(), table: self.table.iter().map(|x| x / total).collect() })
    }

    /// Reorders the scope to `order` (which must be a permutation of it).
    pub fn permute(&self, order: &[&str]) -> Result<Factor> {
        if order.len() != self.scope.len() {
            return Err(PgmError::Structure("permutation does not match scope".into()));
        }
        let scope: Vec<DiscreteVariable> = order
            .iter()
            .map(|n| self.position(n).map(|i| self.scope[i].clone()).ok_or_else(|| PgmError::NotInScope(n.to_string())))
            .collect::<Result<_>>()?;
        let map: Vec<usize> = self.scope.iter().map(|v| position_in(&scope, v.name())).collect();
        let ss = self.strides();
        let table = Assignments::new(&scope)
            .map(|a| {
                let i: usize = map.iter().zip(&ss).map(|(&p, s)| a[p] * s).sum();
                self.table[i]
            })
            .collect();
        Ok(Factor { scope, table })
    }

    /// Largest absolute entry difference after aligning `other`'s scope.
    pub fn max_abs_diff(&self, other: &Factor) -> Result<f64> {
        let names: Vec<&str> = self.scope.iter().map(|v| v.name()).collect();
        let other = other.permute(&names)?;
        Ok(self.table.iter().zip(&other.table).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

fn position_in(scope: &[DiscreteVariable], name: &str) -> usize {
    scope.iter().position(|v| v.name() == name).expect("variable in scope")
}

pub(crate) fn strides_of(scope: &[DiscreteVariable]) -> Vec<usize> {
    let mut strides = vec![1; scope.len()];
    for i in (0..scope.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * scope[i + 1].cardinality();
    }
    strides
}

/// Row-major enumeration of all joint assignments of a scope.
pub struct Assignments {
    cards: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Assignments {
    pub fn new(scope: &[DiscreteVariable]) -> Self {
        Self::from_cardinalities(scope.iter().map(DiscreteVariable::cardinality).collect())
    }

    pub fn from_cardinalities(cards: Vec<usize>) -> Self {
        let next = if cards.contains(&0) { None } else { Some(vec![0; cards.len()]) };
        Assignments { cards, next }
    }
}

impl Iterator for Assignments {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.cards[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}
