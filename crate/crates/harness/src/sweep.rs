//! Noise sweeps: many seeded runs per (condition, epsilon), summarized to CSV.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use miners_sim::ScenarioConfig;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::run::{run_single, Models, RunConfig, RunRecord};
use crate::team::{AuctionParams, Condition};

pub const CSV_HEADER: &str = "condition,epsilon,n,mean,std,min,max";

fn default_epsilons() -> Vec<f64> {
    vec![0.0, 0.025, 0.05, 0.075, 0.1]
}

fn default_conditions() -> Vec<String> {
    ["dummy+rr", "smart+rr", "smart+meu"].map(String::from).to_vec()
}

fn default_opponent() -> String {
    "dummy+rr".into()
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Scenario file, relative to the config file; the default random map otherwise.
    #[serde(default)]
    pub scenario: Option<PathBuf>,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Seeds per (condition, epsilon).
    #[serde(default = "ten")]
    pub seeds: usize,
    /// Run `k` of every point uses seed `seed_base + k`.
    #[serde(default = "one")]
    pub seed_base: u64,
    #[serde(default = "default_conditions")]
    pub conditions: Vec<String>,
    #[serde(default = "default_opponent")]
    pub opponent: String,
    /// Overrides the scenario's step budget.
    #[serde(default)]
    pub steps: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub auction_window: Option<u32>,
    #[serde(default)]
    pub auction_timeout: Option<u32>,
}

fn ten() -> usize {
    10
}

fn one() -> u64 {
    1
}

/// The 5 x 10 x 3 sweep on the default scenario.
pub fn default_sweep() -> ExperimentConfig {
    serde_json::from_str("{}").expect("defaults")
}

/// One run to execute.
#[derive(Clone, Debug)]
pub struct Job {
    pub condition: Condition,
    pub epsilon: f64,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("experiment config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(HarnessError::Invalid(format!("epsilon {e} is outside [0,1]")));
        }
        if self.epsilons.is_empty() {
            return Err(HarnessError::Invalid("no epsilon levels".into()));
        }
        if self.seeds == 0 {
            return Err(HarnessError::Invalid("seeds must be at least 1".into()));
        }
        if self.conditions.is_empty() {
            return Err(HarnessError::Invalid("no conditions".into()));
        }
        self.parsed_conditions()?;
        self.opponent.parse::<Condition>()?;
        Ok(())
    }

    pub fn parsed_conditions(&self) -> Result<Vec<Condition>> {
        self.conditions.iter().map(|c| c.parse()).collect()
    }

    /// Loads the referenced scenario, resolving its path against `base`.
    pub fn load_scenario(&self, base: &Path) -> Result<ScenarioConfig> {
        let mut sc = match &self.scenario {
            None => ScenarioConfig::default(),
            Some(p) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
                ScenarioConfig::from_json(&text)?
            }
        };
        if let Some(s) = self.steps {
            sc.steps = s;
        }
        Ok(sc)
    }

    pub fn jobs(&self) -> Result<Vec<Job>> {
        let mut out = Vec::new();
        for condition in self.parsed_conditions()? {
            for &epsilon in &self.epsilons {
                for k in 0..self.seeds {
                    out.push(Job { condition, epsilon, seed: self.seed_base + k as u64 });
                }
            }
        }
        Ok(out)
    }

    pub fn auction(&self) -> AuctionParams {
        let d = AuctionParams::default();
        AuctionParams {
            window: self.auction_window.unwrap_or(d.window),
            timeout: self.auction_timeout.unwrap_or(d.timeout),
        }
    }
}

/// Runs the jobs in parallel; the result does not depend on job order.
pub fn run_jobs(
    cfg: &ExperimentConfig,
    scenario: &ScenarioConfig,
    models: &Models,
    jobs: &[Job],
) -> Result<Vec<RunRecord>> {
    let opponent: Condition = cfg.opponent.parse()?;
    jobs.par_iter()
        .map(|job| {
            let mut rc = RunConfig::new(scenario.clone(), job.condition, job.epsilon, job.seed);
            rc.opponent = opponent;
            rc.auction = cfg.auction();
            run_single(&rc, models).map(|o| o.record).map_err(|e| {
                HarnessError::Runtime(format!("run ({}, {}, {}) failed: {e}", job.condition, job.epsilon, job.seed))
            })
        })
        .collect()
}

pub fn run_sweep(
    cfg: &ExperimentConfig,
    scenario: &ScenarioConfig,
    models: &Models,
) -> Result<(SweepSummary, Vec<RunRecord>)> {
    cfg.validate()?;
    let records = run_jobs(cfg, scenario, models, &cfg.jobs()?)?;
    Ok((summarize(&records), records))
}

/// Statistics for one (condition, epsilon) point.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub condition: String,
    pub epsilon: f64,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepSummary {
    /// Sorted by condition, then epsilon.
    pub rows: Vec<Row>,
}

fn key_order(a: (&str, f64, u64), b: (&str, f64, u64)) -> Ordering {
    a.0.cmp(b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2))
}

/// Groups records by (condition, epsilon). Records are sorted first, so the
/// floating-point sums are the same whatever order they arrived in.
pub fn summarize(records: &[RunRecord]) -> SweepSummary {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| key_order((&a.condition, a.epsilon, a.seed), (&b.condition, b.epsilon, b.seed)));
    let mut rows = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let (c, e) = (&sorted[i].condition, sorted[i].epsilon);
        let group: Vec<f64> = sorted[i..]
            .iter()
            .take_while(|r| &r.condition == c && r.epsilon.total_cmp(&e).is_eq())
            .map(|r| f64::from(r.score()))
            .collect();
        i += group.len();
        let n = group.len();
        let mean = group.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { group.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        rows.push(Row {
            condition: c.clone(),
            epsilon: e,
            n,
            mean,
            std: var.sqrt(),
            min: group.iter().copied().fold(f64::INFINITY, f64::min),
            max: group.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
    }
    SweepSummary { rows }
}

impl SweepSummary {
    pub fn row(&self, condition: &str, epsilon: f64) -> Option<&Row> {
        self.rows.iter().find(|r| r.condition == condition && r.epsilon == epsilon)
    }

    /// Floats use the shortest text that parses back to the same value.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{},{},{}", r.condition, r.epsilon, r.n, r.mean, r.std, r.min, r.max);
        }
        s
    }
}

pub fn read_csv(text: &str) -> Result<SweepSummary> {
    let bad = |line: usize, msg: &str| HarnessError::Invalid(format!("csv line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(bad(1, "expected header `condition,epsilon,n,mean,std,min,max`")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(bad(i + 1, "expected 7 fields"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(i + 1, &format!("not a number: {s}")));
        rows.push(Row {
            condition: f[0].to_owned(),
            epsilon: num(f[1])?,
            n: f[2].trim().parse().map_err(|_| bad(i + 1, "bad count"))?,
            mean: num(f[3])?,
            std: num(f[4])?,
            min: num(f[5])?,
            max: num(f[6])?,
        });
    }
    Ok(SweepSummary { rows })
}
