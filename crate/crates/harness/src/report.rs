//! Smart+MEU against smart+RR, per noise level.

use std::fmt::Write as _;

use crate::error::{HarnessError, Result};
use crate::sweep::SweepSummary;

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub epsilon: f64,
    pub meu: f64,
    pub rr: f64,
    /// `meu - rr`.
    pub diff: f64,
    /// sqrt(s_meu^2 / n_meu + s_rr^2 / n_rr).
    pub se: f64,
    /// |diff| > 2 se.
    pub flagged: bool,
}

pub const MEU: &str = "smart+meu";
pub const RR: &str = "smart+rr";

pub fn compare(summary: &SweepSummary, meu: &str, rr: &str) -> Result<Vec<Comparison>> {
    let missing = |c: &str| HarnessError::Invalid(format!("summary has no `{c}` rows"));
    if !summary.rows.iter().any(|r| r.condition == meu) {
        return Err(missing(meu));
    }
    if !summary.rows.iter().any(|r| r.condition == rr) {
        return Err(missing(rr));
    }
    let mut out = Vec::new();
    for a in summary.rows.iter().filter(|r| r.condition == meu) {
        let b = summary
            .row(rr, a.epsilon)
            .ok_or_else(|| HarnessError::Invalid(format!("`{rr}` has no row at epsilon {}", a.epsilon)))?;
        let se = (a.std.powi(2) / a.n as f64 + b.std.powi(2) / b.n as f64).sqrt();
        let diff = a.mean - b.mean;
        out.push(Comparison { epsilon: a.epsilon, meu: a.mean, rr: b.mean, diff, se, flagged: diff.abs() > 2.0 * se });
    }
    Ok(out)
}

/// Text table: one line per epsilon, `*` marking differences beyond 2 s.e.
pub fn compare_report(summary: &SweepSummary) -> Result<(String, Vec<Comparison>)> {
    let rows = compare(summary, MEU, RR)?;
    let mut s = format!("epsilon\t{MEU}\t{RR}\tdiff\tse\tflag\n");
    for c in &rows {
        let _ = writeln!(
            s,
            "{}\t{:.3}\t{:.3}\t{:+.3}\t{:.3}\t{}",
            c.epsilon,
            c.meu,
            c.rr,
            c.diff,
            c.se,
            if c.flagged { "*" } else { "" }
        );
    }
    Ok((s, rows))
}
