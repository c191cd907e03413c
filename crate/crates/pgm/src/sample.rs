use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::learn::Record;
use crate::network::BayesianNetwork;

/// Ancestral sampling of `n` complete records.
pub fn sample(bn: &BayesianNetwork, n: usize, seed: u64) -> Vec<Record> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(bn, n, &mut rng)
}

pub fn sample_with<R: Rng + ?Sized>(bn: &BayesianNetwork, n: usize, rng: &mut R) -> Vec<Record> {
    let s = bn.structure();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut record = vec![0; s.variables().len()];
        for &i in s.topological_order() {
            let cpd = &bn.cpds()[i];
            let k = s.variables()[i].cardinality();
            let mut row: Vec<usize> = s.parents_of(i).iter().map(|&p| record[p]).collect();
            row.push(0);
            let start = cpd.index_of(&row);
            record[i] = draw(&cpd.table()[start..start + k], rng.gen::<f64>());
        }
        out.push(record);
    }
    out
}

/// Inverse-CDF draw; zero-probability states are never returned.
fn draw(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
