//! Decision traces and refitting the diagram from them.

use std::collections::BTreeMap;

use pgm::{learn_cpds, InfluenceDiagram, Record, Utility};

use crate::class::IntentionClass;
use crate::diagram::{check_structure, default_utility, DECISION};
use crate::error::{MeuError, Result};
use crate::evidence::{EvidenceRow, CHANCE};
use crate::select::Decision;

/// Default look-ahead for the deposited delta, in environment steps.
pub const HORIZON: u64 = 25;

/// Cells with fewer observations are shrunk toward the default utility.
pub const SHRINK_BELOW: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub evidence: EvidenceRow,
    pub class: IntentionClass,
    pub next: EvidenceRow,
    /// Team score gained over the horizon after the decision.
    pub deposited: f64,
}

/// Turns one agent's decisions from one run into trace records. `scores[s]`
/// is the team score after `s` environment steps. The last decision has no
/// successor and is dropped; horizons are cut at the end of the run.
pub fn collect_traces(decisions: &[Decision], scores: &[u32], horizon: u64) -> Vec<TraceRecord> {
    let Some(last) = scores.len().checked_sub(1) else { return Vec::new() };
    let at = |s: u64| scores[(s as usize).min(last)];
    decisions
        .windows(2)
        .map(|w| TraceRecord {
            evidence: w[0].evidence,
            class: w[0].class,
            next: w[1].evidence,
            deposited: f64::from(at(w[0].step + horizon)) - f64::from(at(w[0].step)),
        })
        .collect()
}

const HEADER: &str = "detected\tassigned\ttransported_agent\ttransported_team\tclass\tnext_detected\tnext_assigned\tnext_transported_agent\tnext_transported_team\tdeposited";

/// Tab-separated, one header line.
pub fn write_traces(records: &[TraceRecord]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in records {
        let mut fields: Vec<String> = r.evidence.names().iter().map(|s| s.to_string()).collect();
        fields.push(r.class.name().into());
        fields.extend(r.next.names().iter().map(|s| s.to_string()));
        fields.push(r.deposited.to_string());
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

pub fn read_traces(text: &str) -> Result<Vec<TraceRecord>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() || (n == 0 && line == HEADER) {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let bad = |msg: &str| MeuError::Parse { line: line_no, msg: msg.to_owned() };
        if f.len() != 10 {
            return Err(bad(&format!("expected 10 fields, got {}", f.len())));
        }
        let evidence = EvidenceRow::parse(&f[0..4]).ok_or_else(|| bad("unknown bin name"))?;
        let class = IntentionClass::parse(f[4]).ok_or_else(|| bad(&format!("unknown class `{}`", f[4])))?;
        let next = EvidenceRow::parse(&f[5..9]).ok_or_else(|| bad("unknown bin name"))?;
        let deposited: f64 = f[9].parse().map_err(|_| bad("deposited is not a number"))?;
        if !deposited.is_finite() {
            return Err(bad("deposited is not finite"));
        }
        out.push(TraceRecord { evidence, class, next, deposited });
    }
    Ok(out)
}

/// Re-estimates every CPD from the traces (chance nodes take the
/// post-decision evidence), and the utility as the mean deposited delta
/// per (TransportedTeam, class) cell. Sparse cells are pulled toward the
/// default utility.
pub fn fit_diagram(base: &InfluenceDiagram, traces: &[TraceRecord], alpha: f64) -> Result<InfluenceDiagram> {
    check_structure(base)?;
    let structure = base.network().structure();
    let mut slots = Vec::new();
    for v in structure.variables() {
        let name = v.name();
        let slot = if name == DECISION {
            None
        } else {
            Some(
                CHANCE
                    .iter()
                    .position(|c| *c == name)
                    .ok_or_else(|| MeuError::Structure(format!("unknown `{name}`")))?,
            )
        };
        slots.push(slot);
    }
    let records: Vec<Record> =
        traces.iter().map(|t| slots.iter().map(|s| s.map_or(t.class.index(), |k| t.next.0[k])).collect()).collect();
    let learned = learn_cpds(structure, &records, alpha)?;
    let d = structure.index_of(DECISION)?;
    let chance: Vec<_> = learned.cpds().iter().enumerate().filter(|(i, _)| *i != d).map(|(_, f)| f.clone()).collect();

    let mut cells: BTreeMap<(usize, IntentionClass), (usize, f64)> = BTreeMap::new();
    for t in traces {
        let e = cells.entry((t.next.0[3], t.class)).or_default();
        e.0 += 1;
        e.1 += t.deposited;
    }
    let old = base.utility();
    let mut values = Vec::with_capacity(18);
    for team in 0..3 {
        for class in IntentionClass::ALL {
            let (n, sum) = cells.get(&(team, class)).copied().unwrap_or((0, 0.0));
            let prior = default_utility(team, class);
            values.push(if n >= SHRINK_BELOW {
                sum / n as f64
            } else {
                (sum + (SHRINK_BELOW - n) as f64 * prior) / SHRINK_BELOW as f64
            });
        }
    }
    let utility = Utility { name: old.name.clone(), parents: old.parents.clone(), values };
    let id = InfluenceDiagram::new(structure.clone(), DECISION, chance, utility)?;
    check_structure(&id)?;
    Ok(id)
}

/// Records drawn from the diagram's own joint, decision uniform; used to
/// check that fitting recovers the tables it was sampled from.
pub fn sample_records(id: &InfluenceDiagram, n: usize, seed: u64) -> Vec<TraceRecord> {
    let structure = id.network().structure();
    let slot = |name: &str| structure.index_of(name).expect("checked structure");
    let d = slot(DECISION);
    let chance: Vec<usize> = CHANCE.iter().map(|c| slot(c)).collect();
    pgm::sample(id.network(), n, seed)
        .into_iter()
        .map(|r| {
            let next = EvidenceRow([r[chance[0]], r[chance[1]], r[chance[2]], r[chance[3]]]);
            let class = IntentionClass::from_index(r[d]).expect("class");
            TraceRecord { evidence: next, class, next, deposited: default_utility(next.0[3], class) }
        })
        .collect()
}
