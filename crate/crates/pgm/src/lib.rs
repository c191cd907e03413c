//! Discrete probabilistic models: table factors, Bayesian networks with
//! variable elimination, single-decision influence diagrams, ML parameter
//! learning and ancestral sampling.

pub mod decision;
mod error;
pub mod factor;
pub mod format;
pub mod inference;
pub mod learn;
pub mod network;
pub mod sample;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use decision::{argmax_among, meu_decide, meu_decide_restricted, InfluenceDiagram, Utility, TIE_TOLERANCE};
pub use error::{PgmError, Result};
pub use factor::{Assignments, DiscreteVariable, Factor};
pub use format::{diagram_from_json, network_from_json, Model};
pub use inference::{ve_query, ve_query_with_order};
pub use learn::{learn_cpds, Record};
pub use network::{uniform_cpd, BayesianNetwork, BnStructure, Evidence};
pub use sample::{sample, sample_with};
