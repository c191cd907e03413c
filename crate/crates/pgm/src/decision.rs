//! Single-decision influence diagrams.

use std::collections::BTreeSet;

use crate::error::{PgmError, Result};
use crate::factor::{strides_of, DiscreteVariable, Factor};
use crate::inference::ve_query;
use crate::network::{uniform_cpd, BayesianNetwork, BnStructure, Evidence};

/// Relative tolerance under which two expected utilities count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Real-valued table over the utility node's parents, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Utility {
    pub name: String,
    pub parents: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceDiagram {
    network: BayesianNetwork,
    decision: String,
    utility: Utility,
    utility_scope: Vec<DiscreteVariable>,
}

impl InfluenceDiagram {
    /// `structure` holds the chance variables and the decision variable; the
    /// decision must be a root. `chance_cpds` are given for every variable
    /// except the decision, in declaration order.
    pub fn new(structure: BnStructure, decision: &str, chance_cpds: Vec<Factor>, utility: Utility) -> Result<Self> {
        let d = structure.index_of(decision)?;
        if !structure.parents_of(d).is_empty() {
            return Err(PgmError::Structure(format!("decision `{decision}` must have no parents")));
        }
        if structure.variables().iter().any(|v| v.name() == utility.name) {
            return Err(PgmError::Structure(format!("utility `{}` clashes with a variable", utility.name)));
        }
        let expected = structure.variables().len() - 1;
        if chance_cpds.len() != expected {
            return Err(PgmError::Structure(format!(
                "{} chance CPDs for {expected} chance variables",
                chance_cpds.len()
            )));
        }
        let mut cpds = chance_cpds;
        cpds.insert(d, uniform_cpd(&structure, d));
        let network = BayesianNetwork::new(structure, cpds)?;

        let distinct: BTreeSet<&String> = utility.parents.iter().collect();
        if distinct.len() != utility.parents.len() {
            return Err(PgmError::Structure("utility parent listed twice".into()));
        }
        let utility_scope: Vec<DiscreteVariable> =
            utility.parents.iter().map(|p| network.structure().variable(p).cloned()).collect::<Result<_>>()?;
        let size: usize = utility_scope.iter().map(DiscreteVariable::cardinality).product();
        if utility.values.len() != size {
            return Err(PgmError::TableSize { scope: utility.name.clone(), expected: size, got: utility.values.len() });
        }
        if utility.values.iter().any(|u| !u.is_finite()) {
            return Err(PgmError::InvalidEntry(utility.name.clone()));
        }
        Ok(InfluenceDiagram { network, decision: decision.to_owned(), utility, utility_scope })
    }

    /// The network over chance variables plus the decision as a uniform root.
    pub fn network(&self) -> &BayesianNetwork {
        &self.network
    }

    pub fn decision(&self) -> &DiscreteVariable {
        self.network.structure().variable(&self.decision).expect("decision variable")
    }

    pub fn decision_name(&self) -> &str {
        &self.decision
    }

    pub fn utility(&self) -> &Utility {
        &self.utility
    }

    /// All arcs including those into the utility node.
    pub fn all_edges(&self) -> Vec<(String, String)> {
        let mut edges = self.network.structure().edges().to_vec();
        edges.extend(self.utility.parents.iter().map(|p| (p.clone(), self.utility.name.clone())));
        edges
    }

    /// Copy with the utility table mapped through `f`.
    pub fn map_utility(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        out.utility.values = self.utility.values.iter().map(|&u| f(u)).collect();
        out
    }

    fn utility_at(&self, assignment: &[usize]) -> f64 {
        let idx: usize = assignment.iter().zip(strides_of(&self.utility_scope)).map(|(a, s)| a * s).sum();
        self.utility.values[idx]
    }

    /// EU of every decision state, in domain order.
    pub fn expected_utilities(&self, evidence: &Evidence) -> Result<Vec<f64>> {
        if evidence.contains_key(&self.decision) {
            return Err(PgmError::Structure("evidence must not assign the decision".into()));
        }
        let chance_parents: Vec<&str> =
            self.utility.parents.iter().filter(|p| **p != self.decision).map(String::as_str).collect();
        let d_pos = self.utility.parents.iter().position(|p| *p == self.decision);
        let mut out = Vec::with_capacity(self.decision().cardinality());
        for a in 0..self.decision().cardinality() {
            let mut ev = evidence.clone();
            ev.insert(self.decision.clone(), a);
            let posterior = ve_query(&self.network, &chance_parents, &ev)?;
            let mut eu = 0.0;
            for (idx, assignment) in crate::factor::Assignments::new(posterior.scope()).enumerate() {
                let p = posterior.table()[idx];
                if p == 0.0 {
                    continue;
                }
                let mut full = assignment;
                if let Some(k) = d_pos {
                    full.insert(k, a);
                }
                eu += p * self.utility_at(&full);
            }
            out.push(eu);
        }
        Ok(out)
    }
}

/// Decision state maximizing EU, plus the EU vector.
pub fn meu_decide(id: &InfluenceDiagram, evidence: &Evidence) -> Result<(usize, Vec<f64>)> {
    let eu = id.expected_utilities(evidence)?;
    let all: Vec<usize> = (0..eu.len()).collect();
    Ok((argmax_among(&eu, &all).expect("decision has states"), eu))
}

/// Like [`meu_decide`] but choosing only among `allowed` decision states.
pub fn meu_decide_restricted(
    id: &InfluenceDiagram,
    evidence: &Evidence,
    allowed: &[usize],
) -> Result<(usize, Vec<f64>)> {
    let k = id.decision().cardinality();
    if allowed.is_empty() || allowed.iter().any(|&a| a >= k) {
        return Err(PgmError::Structure("allowed decision set must be non-empty and in range".into()));
    }
    let eu = id.expected_utilities(evidence)?;
    Ok((argmax_among(&eu, allowed).expect("non-empty"), eu))
}

/// Highest value among `allowed`, the lowest index winning near-ties.
pub fn argmax_among(values: &[f64], allowed: &[usize]) -> Option<usize> {
    let mut sorted: Vec<usize> = allowed.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut best: Option<usize> = None;
    for i in sorted {
        match best {
            None => best = Some(i),
            Some(b) => {
                let scale = values[b].abs().max(values[i].abs()).max(1.0);
                if values[i] > values[b] + TIE_TOLERANCE * scale {
                    best = Some(i);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_action_diagram(p_good: [f64; 2], u: [f64; 2]) -> InfluenceDiagram {
        let d = DiscreteVariable::with_states("D", &["a1", "a2"]).unwrap();
        let o = DiscreteVariable::with_states("O", &["bad", "good"]).unwrap();
        let s = BnStructure::new(vec![d.clone(), o.clone()], vec![("D".into(), "O".into())]).unwrap();
        let cpd = Factor::new(vec![d, o], vec![1.0 - p_good[0], p_good[0], 1.0 - p_good[1], p_good[1]]).unwrap();
        let utility = Utility { name: "U".into(), parents: vec!["O".into()], values: u.to_vec() };
        InfluenceDiagram::new(s, "D", vec![cpd], utility).unwrap()
    }

    #[test]
    fn hand_arithmetic() {
        let id = two_action_diagram([0.9, 0.1], [0.0, 10.0]);
        let (best, eu) = meu_decide(&id, &Evidence::new()).unwrap();
        assert_eq!(best, 0);
        assert!((eu[0] - 9.0).abs() < 1e-12 && (eu[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ties_go_to_first_state() {
        let id = two_action_diagram([0.5, 0.5], [0.0, 10.0]);
        let (best, eu) = meu_decide(&id, &Evidence::new()).unwrap();
        assert_eq!(best, 0);
        assert_eq!(eu[0], eu[1]);
    }

    #[test]
    fn restriction() {
        let id = two_action_diagram([0.9, 0.1], [0.0, 10.0]);
        assert_eq!(meu_decide_restricted(&id, &Evidence::new(), &[1]).unwrap().0, 1);
        assert!(meu_decide_restricted(&id, &Evidence::new(), &[]).is_err());
        assert!(meu_decide_restricted(&id, &Evidence::new(), &[2]).is_err());
    }

    #[test]
    fn utility_over_decision_and_chance() {
        let d = DiscreteVariable::with_states("D", &["a1", "a2"]).unwrap();
        let o = DiscreteVariable::with_states("O", &["bad", "good"]).unwrap();
        let s = BnStructure::new(vec![o.clone(), d], vec![]).unwrap();
        let cpd = Factor::new(vec![o], vec![0.5, 0.5]).unwrap();
        // u(O, D): rows O, columns D
        let utility =
            Utility { name: "U".into(), parents: vec!["O".into(), "D".into()], values: vec![0.0, 4.0, 2.0, 0.0] };
        let id = InfluenceDiagram::new(s, "D", vec![cpd], utility).unwrap();
        let (best, eu) = meu_decide(&id, &Evidence::new()).unwrap();
        assert_eq!(eu, vec![1.0, 2.0]);
        assert_eq!(best, 1);
        let e = id.network().evidence(&[("O", "good")]).unwrap();
        assert_eq!(meu_decide(&id, &e).unwrap(), (0, vec![2.0, 0.0]));
    }

    #[test]
    fn decision_with_parents_is_rejected() {
        let d = DiscreteVariable::with_states("D", &["a1", "a2"]).unwrap();
        let o = DiscreteVariable::with_states("O", &["bad", "good"]).unwrap();
        let s = BnStructure::new(vec![o.clone(), d], vec![("O".into(), "D".into())]).unwrap();
        let cpd = Factor::new(vec![o], vec![0.5, 0.5]).unwrap();
        let utility = Utility { name: "U".into(), parents: vec!["O".into()], values: vec![0.0, 1.0] };
        assert!(InfluenceDiagram::new(s, "D", vec![cpd], utility).is_err());
    }

    #[test]
    fn argmax_tolerance() {
        assert_eq!(argmax_among(&[1.0, 1.0 + 1e-12, 0.5], &[0, 1, 2]), Some(0));
        assert_eq!(argmax_among(&[1.0, 2.0, 3.0], &[1, 0]), Some(1));
        assert_eq!(argmax_among(&[1.0], &[]), None);
    }
}
