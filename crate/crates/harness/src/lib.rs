//! Experiment harness for the GoldMiners teams: single runs, noise sweeps,
//! summary statistics and the MEU-versus-round-robin report.

mod error;
pub mod host;
pub mod protocol;
pub mod report;
pub mod run;
pub mod sweep;
pub mod team;

pub use error::{HarnessError, Result};
pub use report::{compare_report, Comparison};
pub use run::{run_single, run_with_programs, Models, RunConfig, RunOutput, RunRecord, CYCLE_CAP};
pub use sweep::{default_sweep, read_csv, run_sweep, summarize, ExperimentConfig, Row, SweepSummary};
pub use team::{AuctionParams, Condition, Programs, Role, SelectorKind, TeamKind, TeamSpec};
