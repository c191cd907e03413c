//! Maximum-likelihood CPD estimation with additive smoothing.

use crate::error::{PgmError, Result};
use crate::factor::{Assignments, Factor};
use crate::network::{BayesianNetwork, BnStructure};

/// A complete assignment: one state index per variable, declaration order.
pub type Record = Vec<usize>;

/// Estimates every CPD as (n(x,u) + alpha) / (n(u) + alpha * |X|).
///
/// With `alpha == 0`, an empty dataset leaves the CPDs undefined. Parent rows
/// that never occur in a non-empty dataset fall back to uniform.
pub fn learn_cpds(structure: &BnStructure, data: &[Record], alpha: f64) -> Result<BayesianNetwork> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(PgmError::Structure(format!("smoothing must be finite and >= 0, got {alpha}")));
    }
    let vars = structure.variables();
    for (r, record) in data.iter().enumerate() {
        if record.len() != vars.len() {
            return Err(PgmError::IncompleteRecord(r));
        }
        for (v, &s) in vars.iter().zip(record) {
            if s >= v.cardinality() {
                return Err(PgmError::UnknownState { variable: v.name().to_owned(), state: s.to_string() });
            }
        }
    }
    if data.is_empty() && alpha == 0.0 {
        let first = vars.first().map(|v| v.name().to_owned()).unwrap_or_default();
        return Err(PgmError::UndefinedCpd(first));
    }

    let mut cpds = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let scope = structure.cpd_scope(i);
        let size = Assignments::new(&scope).count();
        let mut counts = vec![0.0; size];
        let probe = Factor::new(scope.clone(), vec![0.0; size])?;
        let parents = structure.parents_of(i);
        for record in data {
            let mut row: Vec<usize> = parents.iter().map(|&p| record[p]).collect();
            row.push(record[i]);
            counts[probe.index_of(&row)] += 1.0;
        }
        let k = vars[i].cardinality();
        let mut table = Vec::with_capacity(size);
        for chunk in counts.chunks(k) {
            let n: f64 = chunk.iter().sum();
            let denom = n + alpha * k as f64;
            if denom == 0.0 {
                table.extend(std::iter::repeat_n(1.0 / k as f64, k));
            } else {
                table.extend(chunk.iter().map(|c| (c + alpha) / denom));
            }
        }
        cpds.push(Factor::new(scope, table)?);
    }
    BayesianNetwork::new(structure.clone(), cpds)
}
