//! Exact inference by variable elimination.

use std::collections::BTreeSet;

use crate::error::{PgmError, Result};
use crate::factor::{DiscreteVariable, Factor};
use crate::network::{BayesianNetwork, Evidence};

/// P(query | evidence), normalized, with scope in `query` order.
///
/// Hidden variables are eliminated in min-degree order, ties broken by name.
pub fn ve_query(bn: &BayesianNetwork, query: &[&str], evidence: &Evidence) -> Result<Factor> {
    run(bn, query, evidence, None)
}

/// Same as [`ve_query`] but eliminating hidden variables in the given order.
/// `order` must list every variable that is neither queried nor observed.
pub fn ve_query_with_order(
    bn: &BayesianNetwork,
    query: &[&str],
    evidence: &Evidence,
    order: &[&str],
) -> Result<Factor> {
    run(bn, query, evidence, Some(order))
}

fn run(bn: &BayesianNetwork, query: &[&str], evidence: &Evidence, order: Option<&[&str]>) -> Result<Factor> {
    bn.check_evidence(evidence)?;
    let mut seen = BTreeSet::new();
    for q in query {
        bn.structure().index_of(q)?;
        if !seen.insert(*q) {
            return Err(PgmError::Structure(format!("query lists `{q}` twice")));
        }
    }

    let mut factors = Vec::with_capacity(bn.cpds().len());
    for cpd in bn.cpds() {
        let mut f = cpd.clone();
        for v in cpd.scope() {
            if let Some(&state) = evidence.get(v.name()) {
                f = f.reduce(v.name(), state)?;
            }
        }
        factors.push(f);
    }

    let hidden: BTreeSet<String> = bn
        .variables()
        .iter()
        .map(|v| v.name().to_owned())
        .filter(|n| !evidence.contains_key(n) && !seen.contains(n.as_str()))
        .collect();

    match order {
        Some(order) => {
            let given: BTreeSet<String> = order.iter().map(|s| s.to_string()).collect();
            if given != hidden || given.len() != order.len() {
                return Err(PgmError::Structure("elimination order must list each hidden variable once".into()));
            }
            for name in order {
                factors = eliminate(factors, name)?;
            }
        }
        None => {
            let mut remaining = hidden;
            while let Some(name) = pick_min_degree(&factors, &remaining) {
                remaining.remove(&name);
                factors = eliminate(factors, &name)?;
            }
        }
    }

    let mut product = Factor::identity();
    for f in &factors {
        product = product.multiply(f)?;
    }
    if product.sum() <= 0.0 {
        return Err(PgmError::InconsistentEvidence);
    }

    // Observed query variables: point mass on the observed state.
    for q in query {
        if let Some(&state) = evidence.get(*q) {
            let v = bn.structure().variable(q)?;
            product = product.multiply(&point_mass(v, state))?;
        }
    }
    let names: Vec<&str> = query.to_vec();
    product.permute(&names)?.normalize()
}

fn point_mass(v: &DiscreteVariable, state: usize) -> Factor {
    let mut table = vec![0.0; v.cardinality()];
    table[state] = 1.0;
    Factor::new(vec![v.clone()], table).expect("point mass is valid")
}

/// Hidden variable with the fewest neighbours in the current interaction graph.
fn pick_min_degree(factors: &[Factor], remaining: &BTreeSet<String>) -> Option<String> {
    remaining
        .iter()
        .map(|name| {
            let mut neighbours = BTreeSet::new();
            for f in factors.iter().filter(|f| f.contains(name)) {
                neighbours.extend(f.scope().iter().map(|v| v.name()).filter(|n| n != name));
            }
            (neighbours.len(), name)
        })
        .min()
        .map(|(_, name)| name.clone())
}

fn eliminate(factors: Vec<Factor>, name: &str) -> Result<Vec<Factor>> {
    let (touching, mut rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.contains(name));
    if touching.is_empty() {
        return Ok(rest);
    }
    let mut product = Factor::identity();
    for f in &touching {
        product = product.multiply(f)?;
    }
    rest.push(product.marginalize(name)?);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::BnStructure;

    fn chain() -> BayesianNetwork {
        let a = DiscreteVariable::with_states("A", &["f", "t"]).unwrap();
        let b = DiscreteVariable::with_states("B", &["f", "t"]).unwrap();
        let s = BnStructure::new(vec![a.clone(), b.clone()], vec![("A".into(), "B".into())]).unwrap();
        let pa = Factor::new(vec![a.clone()], vec![0.4, 0.6]).unwrap();
        let pb = Factor::new(vec![a, b], vec![0.9, 0.1, 0.3, 0.7]).unwrap();
        BayesianNetwork::new(s, vec![pa, pb]).unwrap()
    }

    #[test]
    fn forward_product_on_a_chain() {
        let bn = chain();
        let m = ve_query(&bn, &["B"], &Evidence::new()).unwrap();
        // P(B=t) = .4*.1 + .6*.7
        assert!((m.table()[1] - 0.46).abs() < 1e-12);
        assert!((m.table()[0] - 0.54).abs() < 1e-12);
    }

    #[test]
    fn diagnostic_query() {
        let bn = chain();
        let e = bn.evidence(&[("B", "t")]).unwrap();
        let m = ve_query(&bn, &["A"], &e).unwrap();
        assert!((m.table()[1] - 0.42 / 0.46).abs() < 1e-12);
    }

    #[test]
    fn query_given_itself_is_a_point_mass() {
        let bn = chain();
        let e = bn.evidence(&[("A", "t")]).unwrap();
        let m = ve_query(&bn, &["A"], &e).unwrap();
        assert_eq!(m.table(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_probability_evidence() {
        let a = DiscreteVariable::with_states("A", &["f", "t"]).unwrap();
        let s = BnStructure::new(vec![a.clone()], vec![]).unwrap();
        let bn = BayesianNetwork::new(s, vec![Factor::new(vec![a], vec![1.0, 0.0]).unwrap()]).unwrap();
        let e = bn.evidence(&[("A", "t")]).unwrap();
        assert_eq!(ve_query(&bn, &["A"], &e), Err(PgmError::InconsistentEvidence));
    }

    #[test]
    fn explicit_order_must_cover_hidden_variables() {
        let bn = chain();
        assert!(ve_query_with_order(&bn, &["B"], &Evidence::new(), &[]).is_err());
        let m = ve_query_with_order(&bn, &["B"], &Evidence::new(), &["A"]).unwrap();
        assert!((m.table()[1] - 0.46).abs() < 1e-12);
    }
}
