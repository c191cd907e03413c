//! Brute-force reference computations and random model generators, for tests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decision::{InfluenceDiagram, Utility};
use crate::factor::{Assignments, DiscreteVariable, Factor};
use crate::network::{BayesianNetwork, BnStructure, Evidence};

/// Product by looking up each entry through variable names.
pub fn brute_product(f: &Factor, g: &Factor) -> Factor {
    let mut scope: Vec<DiscreteVariable> = f.scope().to_vec();
    for v in g.scope() {
        if !scope.iter().any(|w| w.name() == v.name()) {
            scope.push(v.clone());
        }
    }
    let table = Assignments::new(&scope)
        .map(|a| {
            let named: BTreeMap<&str, usize> = scope.iter().map(|v| v.name()).zip(a).collect();
            lookup(f, &named) * lookup(g, &named)
        })
        .collect();
    Factor::new(scope, table).unwrap()
}

/// Sum out `name` by enumerating the full scope.
pub fn brute_sum_out(f: &Factor, name: &str) -> Factor {
    let scope: Vec<DiscreteVariable> = f.scope().iter().filter(|v| v.name() != name).cloned().collect();
    let removed = f.scope().iter().find(|v| v.name() == name).expect("in scope");
    let table = Assignments::new(&scope)
        .map(|a| {
            let mut named: BTreeMap<&str, usize> = scope.iter().map(|v| v.name()).zip(a).collect();
            (0..removed.cardinality())
                .map(|s| {
                    named.insert(name, s);
                    lookup(f, &named)
                })
                .sum()
        })
        .collect();
    Factor::new(scope, table).unwrap()
}

fn lookup(f: &Factor, named: &BTreeMap<&str, usize>) -> f64 {
    let a: Vec<usize> = f.scope().iter().map(|v| named[v.name()]).collect();
    f.value(&a)
}

/// P(query | evidence) by summing the full joint. `None` if P(evidence) = 0.
pub fn brute_query(bn: &BayesianNetwork, query: &[&str], evidence: &Evidence) -> Option<Factor> {
    let vars = bn.variables();
    let qidx: Vec<usize> = query.iter().map(|q| bn.structure().index_of(q).unwrap()).collect();
    let qscope: Vec<DiscreteVariable> = qidx.iter().map(|&i| vars[i].clone()).collect();
    let mut table = vec![0.0; Assignments::new(&qscope).count()];
    let probe = Factor::new(qscope.clone(), table.clone()).unwrap();
    let eidx: Vec<(usize, usize)> = evidence.iter().map(|(n, &s)| (bn.structure().index_of(n).unwrap(), s)).collect();
    for a in Assignments::new(vars) {
        if eidx.iter().any(|&(i, s)| a[i] != s) {
            continue;
        }
        let q: Vec<usize> = qidx.iter().map(|&i| a[i]).collect();
        table[probe.index_of(&q)] += bn.joint_probability(&a);
    }
    let z: f64 = table.iter().sum();
    if z <= 0.0 {
        return None;
    }
    Factor::new(qscope, table.iter().map(|x| x / z).collect()).ok()
}

/// EU per decision state by enumerating every joint outcome of the network.
pub fn brute_expected_utilities(id: &InfluenceDiagram, evidence: &Evidence) -> Option<Vec<f64>> {
    let bn = id.network();
    let vars = bn.variables();
    let d = bn.structure().index_of(id.decision_name()).unwrap();
    let u = id.utility();
    let uidx: Vec<usize> = u.parents.iter().map(|p| bn.structure().index_of(p).unwrap()).collect();
    let uscope: Vec<DiscreteVariable> = uidx.iter().map(|&i| vars[i].clone()).collect();
    let probe = Factor::new(uscope.clone(), vec![0.0; Assignments::new(&uscope).count()]).unwrap();
    let eidx: Vec<(usize, usize)> = evidence.iter().map(|(n, &s)| (bn.structure().index_of(n).unwrap(), s)).collect();
    let mut out = Vec::new();
    for a_d in 0..vars[d].cardinality() {
        let (mut num, mut z) = (0.0, 0.0);
        for a in Assignments::new(vars) {
            if a[d] != a_d || eidx.iter().any(|&(i, s)| a[i] != s) {
                continue;
            }
            let p = bn.joint_probability(&a);
            let key: Vec<usize> = uidx.iter().map(|&i| a[i]).collect();
            num += p * u.values[probe.index_of(&key)];
            z += p;
        }
        if z <= 0.0 {
            return None;
        }
        out.push(num / z);
    }
    Some(out)
}

fn random_variables<R: Rng>(rng: &mut R, n: usize, max_states: usize, prefix: &str) -> Vec<DiscreteVariable> {
    (0..n)
        .map(|i| {
            let k = rng.gen_range(2..=max_states);
            DiscreteVariable::new(format!("{prefix}{i}"), (0..k).map(|s| format!("s{s}")).collect()).unwrap()
        })
        .collect()
}

/// Random DAG edges: `i -> j` only for i < j in a shuffled order.
fn random_edges<R: Rng>(rng: &mut R, names: &[String], density: f64) -> Vec<(String, String)> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for j in 0..order.len() {
        for i in 0..j {
            if rng.gen_bool(density) {
                edges.push((names[order[i]].clone(), names[order[j]].clone()));
            }
        }
    }
    edges
}

/// Random positive CPD; some rows may include exact zeros when `zeros`.
pub fn random_cpd<R: Rng>(rng: &mut R, structure: &BnStructure, i: usize, zeros: bool) -> Factor {
    let scope = structure.cpd_scope(i);
    let k = structure.variables()[i].cardinality();
    let rows = Assignments::new(&scope).count() / k;
    let mut table = Vec::new();
    for _ in 0..rows {
        let mut row: Vec<f64> =
            (0..k).map(|_| if zeros && rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.05..1.0) }).collect();
        if row.iter().all(|&x| x == 0.0) {
            row[0] = 1.0;
        }
        let z: f64 = row.iter().sum();
        table.extend(row.iter().map(|x| x / z));
    }
    Factor::new(scope, table).unwrap()
}

/// Network with 1..=max_vars variables of 2..=max_states states.
pub fn random_network<R: Rng>(rng: &mut R, max_vars: usize, max_states: usize) -> BayesianNetwork {
    let n = rng.gen_range(1..=max_vars);
    let vars = random_variables(rng, n, max_states, "V");
    let names: Vec<String> = vars.iter().map(|v| v.name().to_owned()).collect();
    let edges = random_edges(rng, &names, 0.5);
    let structure = BnStructure::new(vars, edges).unwrap();
    let cpds = (0..n).map(|i| random_cpd(rng, &structure, i, true)).collect();
    BayesianNetwork::new(structure, cpds).unwrap()
}

/// Diagram with 1..=max_chance chance nodes, a decision, and a random utility.
pub fn random_diagram<R: Rng>(rng: &mut R, max_chance: usize, max_states: usize) -> InfluenceDiagram {
    let n = rng.gen_range(1..=max_chance);
    let mut vars = random_variables(rng, n, max_states, "C");
    let k = rng.gen_range(2..=max_states.max(2));
    let decision = DiscreteVariable::new("D", (0..k).map(|s| format!("a{s}")).collect()).unwrap();
    let names: Vec<String> = vars.iter().map(|v| v.name().to_owned()).collect();
    let mut edges = random_edges(rng, &names, 0.5);
    for name in &names {
        if rng.gen_bool(0.5) {
            edges.push(("D".to_owned(), name.clone()));
        }
    }
    vars.push(decision);
    let structure = BnStructure::new(vars, edges).unwrap();
    let cpds = (0..n).map(|i| random_cpd(rng, &structure, i, false)).collect();

    let mut pool: Vec<String> = names.clone();
    pool.push("D".into());
    pool.shuffle(rng);
    let take = rng.gen_range(1..=pool.len().min(3));
    let parents: Vec<String> = pool.into_iter().take(take).collect();
    let size: usize = parents.iter().map(|p| structure.variable(p).unwrap().cardinality()).product();
    let values = (0..size).map(|_| rng.gen_range(-10.0..10.0)).collect();
    InfluenceDiagram::new(structure, "D", cpds, Utility { name: "U".into(), parents, values }).unwrap()
}

/// Random partial evidence over the given variables.
pub fn random_evidence<R: Rng>(rng: &mut R, vars: &[DiscreteVariable], skip: Option<&str>) -> Evidence {
    let mut e = Evidence::new();
    for v in vars {
        if Some(v.name()) != skip && rng.gen_bool(0.3) {
            e.insert(v.name().to_owned(), rng.gen_range(0..v.cardinality()));
        }
    }
    e
}
