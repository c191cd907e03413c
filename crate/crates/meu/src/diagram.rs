use std::collections::BTreeSet;

use pgm::{InfluenceDiagram, Model};
use sha2::{Digest, Sha256};

use crate::class::IntentionClass;
use crate::error::{MeuError, Result};
use crate::evidence::{BINS, CHANCE};

pub const DECISION: &str = "SelectedIntention";
pub const UTILITY: &str = "Deposited";

/// Shipped model with hand-set priors.
pub const DEFAULT_MODEL: &str = include_str!("../../../models/miners-id.json");

/// The six nodes of the diagram.
pub fn expected_nodes() -> BTreeSet<&'static str> {
    CHANCE.iter().copied().chain([DECISION, UTILITY]).collect()
}

/// The nine arcs, utility arcs included.
pub fn expected_edges() -> BTreeSet<(&'static str, &'static str)> {
    [
        ("Detected", "Assigned"),
        ("Assigned", "TransportedAgent"),
        ("Assigned", "TransportedTeam"),
        ("TransportedAgent", "TransportedTeam"),
        (DECISION, "Detected"),
        (DECISION, "Assigned"),
        (DECISION, "TransportedAgent"),
        (DECISION, UTILITY),
        ("TransportedTeam", UTILITY),
    ]
    .into_iter()
    .collect()
}

pub fn nodes_of(id: &InfluenceDiagram) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = id.network().variables().iter().map(|v| v.name().to_owned()).collect();
    out.insert(id.utility().name.clone());
    out
}

pub fn edges_of(id: &InfluenceDiagram) -> BTreeSet<(String, String)> {
    id.all_edges().into_iter().collect()
}

/// Rejects any diagram whose nodes, arcs or domains differ from the
/// expected ones.
pub fn check_structure(id: &InfluenceDiagram) -> Result<()> {
    let nodes = nodes_of(id);
    let want: BTreeSet<String> = expected_nodes().into_iter().map(str::to_owned).collect();
    if nodes != want {
        return Err(MeuError::Structure(format!("nodes {nodes:?}, expected {want:?}")));
    }
    let edges = edges_of(id);
    let want: BTreeSet<(String, String)> =
        expected_edges().into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect();
    if edges != want {
        let missing: Vec<_> = want.difference(&edges).collect();
        let extra: Vec<_> = edges.difference(&want).collect();
        return Err(MeuError::Structure(format!("edge set differs: missing {missing:?}, extra {extra:?}")));
    }
    if id.decision_name() != DECISION {
        return Err(MeuError::Structure(format!("decision is `{}`, expected `{DECISION}`", id.decision_name())));
    }
    let classes: Vec<&str> = IntentionClass::ALL.iter().map(|c| c.name()).collect();
    if id.decision().states() != classes.as_slice() {
        return Err(MeuError::Structure(format!("decision states must be {classes:?}")));
    }
    for name in CHANCE {
        let v = id.network().structure().variable(name)?;
        if v.states() != BINS.as_slice() {
            return Err(MeuError::Structure(format!("`{name}` states must be {BINS:?}")));
        }
    }
    Ok(())
}

pub fn load_diagram(json: &str) -> Result<InfluenceDiagram> {
    let id = pgm::diagram_from_json(json)?;
    check_structure(&id)?;
    Ok(id)
}

pub fn build_default_diagram() -> InfluenceDiagram {
    load_diagram(DEFAULT_MODEL).expect("shipped model is valid")
}

pub fn diagram_json(id: &InfluenceDiagram) -> String {
    Model::Diagram(id.clone()).to_json()
}

/// SHA-256 of the canonical serialization.
pub fn diagram_hash(id: &InfluenceDiagram) -> String {
    hex::encode(Sha256::digest(diagram_json(id).as_bytes()))
}

/// Bin midpoints used by the default utility.
pub const MIDPOINTS: [f64; 3] = [0.0, 1.5, 4.0];

/// u(t, s) = midpoint(t) + 3 if s is deliver and t is not none.
pub fn default_utility(team: usize, class: IntentionClass) -> f64 {
    MIDPOINTS[team] + if class == IntentionClass::Deliver && team != 0 { 3.0 } else { 0.0 }
}
