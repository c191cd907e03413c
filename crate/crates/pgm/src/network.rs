use std::collections::{BTreeMap, BTreeSet};

use crate::error::{PgmError, Result};
use crate::factor::{Assignments, DiscreteVariable, Factor};

/// Partial assignment: variable name to state index.
pub type Evidence = BTreeMap<String, usize>;

/// Tolerance for CPD row sums.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Variables and directed edges, without parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct BnStructure {
    variables: Vec<DiscreteVariable>,
    edges: Vec<(String, String)>,
    parents: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl BnStructure {
    pub fn new(variables: Vec<DiscreteVariable>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.name().to_owned(), i).is_some() {
                return Err(PgmError::Structure(format!("variable `{}` declared twice", v.name())));
            }
        }
        let mut parents = vec![Vec::new(); variables.len()];
        let mut seen = BTreeSet::new();
        for (from, to) in &edges {
            let f = *index.get(from).ok_or_else(|| PgmError::UnknownVariable(from.clone()))?;
            let t = *index.get(to).ok_or_else(|| PgmError::UnknownVariable(to.clone()))?;
            if f == t {
                return Err(PgmError::Cycle(from.clone()));
            }
            if !seen.insert((f, t)) {
                return Err(PgmError::Structure(format!("edge {from} -> {to} listed twice")));
            }
            parents[t].push(f);
        }
        let order = topological_order(&variables, &parents)?;
        Ok(BnStructure { variables, edges, parents, order })
    }

    pub fn variables(&self) -> &[DiscreteVariable] {
        &self.variables
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v.name() == name).ok_or_else(|| PgmError::UnknownVariable(name.to_owned()))
    }

    pub fn variable(&self, name: &str) -> Result<&DiscreteVariable> {
        Ok(&self.variables[self.index_of(name)?])
    }

    /// Parent indices of variable `i`, in edge-declaration order.
    pub fn parents_of(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn parent_names(&self, name: &str) -> Result<Vec<&str>> {
        let i = self.index_of(name)?;
        Ok(self.parents[i].iter().map(|&p| self.variables[p].name()).collect())
    }

    /// Variable indices, parents before children; ties by declaration order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// CPD scope for variable `i`: parents first, child last.
    pub fn cpd_scope(&self, i: usize) -> Vec<DiscreteVariable> {
        let mut scope: Vec<DiscreteVariable> = self.parents[i].iter().map(|&p| self.variables[p].clone()).collect();
        scope.push(self.variables[i].clone());
        scope
    }
}

fn topological_order(variables: &[DiscreteVariable], parents: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = variables.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| !placed[i] && parents[i].iter().all(|&p| placed[p]));
        match next {
            Some(i) => {
                placed[i] = true;
                order.push(i);
            }
            None => {
                let stuck = (0..n).find(|&i| !placed[i]).expect("unplaced variable");
                return Err(PgmError::Cycle(variables[stuck].name().to_owned()));
            }
        }
    }
    Ok(order)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BayesianNetwork {
    structure: BnStructure,
    cpds: Vec<Factor>,
}

impl BayesianNetwork {
    /// `cpds[i]` belongs to variable `i`. A CPD whose scope is a permutation
    /// of the expected one is reordered to parents-then-child.
    pub fn new(structure: BnStructure, cpds: Vec<Factor>) -> Result<Self> {
        if cpds.len() != structure.variables.len() {
            return Err(PgmError::Structure(format!(
                "{} CPDs for {} variables",
                cpds.len(),
                structure.variables.len()
            )));
        }
        let mut canonical = Vec::with_capacity(cpds.len());
        for (i, cpd) in cpds.into_iter().enumerate() {
            let scope = structure.cpd_scope(i);
            let names: Vec<&str> = scope.iter().map(|v| v.name()).collect();
            let child = structure.variables[i].name();
            let same_set = cpd.scope().len() == scope.len()
                && scope.iter().all(|v| cpd.position(v.name()).map(|k| &cpd.scope()[k]) == Some(v));
            if !same_set {
                return Err(PgmError::Structure(format!("CPD of `{child}` must have scope {{{}}}", names.join(","))));
            }
            let cpd = cpd.permute(&names)?;
            check_rows(child, &cpd)?;
            canonical.push(cpd);
        }
        Ok(BayesianNetwork { structure, cpds: canonical })
    }

    pub fn structure(&self) -> &BnStructure {
        &self.structure
    }

    pub fn variables(&self) -> &[DiscreteVariable] {
        self.structure.variables()
    }

    pub fn cpds(&self) -> &[Factor] {
        &self.cpds
    }

    pub fn cpd(&self, name: &str) -> Result<&Factor> {
        Ok(&self.cpds[self.structure.index_of(name)?])
    }

    /// Probability of a full assignment (state index per variable, declaration order).
    pub fn joint_probability(&self, assignment: &[usize]) -> f64 {
        let mut p = 1.0;
        for (i, cpd) in self.cpds.iter().enumerate() {
            let mut row: Vec<usize> = self.structure.parents[i].iter().map(|&q| assignment[q]).collect();
            row.push(assignment[i]);
            p *= cpd.value(&row);
            if p == 0.0 {
                break;
            }
        }
        p
    }

    /// Resolves state labels to an evidence map.
    pub fn evidence(&self, pairs: &[(&str, &str)]) -> Result<Evidence> {
        let mut out = Evidence::new();
        for (name, state) in pairs {
            let v = self.structure.variable(name)?;
            out.insert((*name).to_owned(), v.state_index(state)?);
        }
        Ok(out)
    }

    pub(crate) fn check_evidence(&self, evidence: &Evidence) -> Result<()> {
        for (name, &state) in evidence {
            let v = self.structure.variable(name)?;
            if state >= v.cardinality() {
                return Err(PgmError::UnknownState { variable: name.clone(), state: state.to_string() });
            }
        }
        Ok(())
    }
}

/// Every parent row of a CPD (child last in scope) must sum to one.
pub(crate) fn check_rows(child: &str, cpd: &Factor) -> Result<()> {
    let k = cpd.scope().last().map(DiscreteVariable::cardinality).unwrap_or(1);
    for (row, chunk) in cpd.table().chunks(k).enumerate() {
        let sum: f64 = chunk.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(PgmError::NotNormalized { variable: child.to_owned(), row, sum });
        }
    }
    Ok(())
}

/// Uniform CPD for variable `i` of the structure.
pub fn uniform_cpd(structure: &BnStructure, i: usize) -> Factor {
    let scope = structure.cpd_scope(i);
    let k = structure.variables[i].cardinality() as f64;
    let size = Assignments::new(&scope).count();
    Factor::new(scope, vec![1.0 / k; size]).expect("uniform table is valid")
}
