//! Intention selection by maximum expected utility. Intentions are grouped
//! into classes, evidence is read off the belief base, and a compiled
//! policy (or an online solver) picks the class to run.

mod class;
pub mod diagram;
mod error;
mod evidence;
pub mod policy;
mod select;
pub mod trace;

pub use class::{ClassSet, IntentionClass};
pub use diagram::{build_default_diagram, check_structure, diagram_hash, load_diagram, DEFAULT_MODEL};
pub use error::{MeuError, Result};
pub use evidence::{bin, extract_evidence, step_of, EvidenceRow, BINS, CHANCE};
pub use policy::{compile_policy, decide, CompiledPolicy, Provenance};
pub use select::{ClassSelector, Decision, DecisionLog, Mode};
pub use trace::{collect_traces, fit_diagram, read_traces, sample_records, write_traces, TraceRecord, HORIZON};
