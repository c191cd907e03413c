use asl::Term;
use bdi::{AgentView, BeliefBase};
use pgm::Evidence;

/// Chance variables in declaration order.
pub const CHANCE: [&str; 4] = ["Detected", "Assigned", "TransportedAgent", "TransportedTeam"];
pub const BINS: [&str; 3] = ["none", "low", "high"];

/// Binned count: 0 is none, 1-2 low, 3 and more high.
pub fn bin(count: i64) -> usize {
    match count {
        i64::MIN..=0 => 0,
        1..=2 => 1,
        _ => 2,
    }
}

/// Complete assignment of the four chance variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvidenceRow(pub [usize; 4]);

impl EvidenceRow {
    pub const COUNT: usize = 81;

    /// Row number, Detected most significant.
    pub fn index(self) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * 3 + s)
    }

    pub fn from_index(mut i: usize) -> Self {
        let mut out = [0; 4];
        for slot in out.iter_mut().rev() {
            *slot = i % 3;
            i /= 3;
        }
        EvidenceRow(out)
    }

    pub fn all() -> impl Iterator<Item = EvidenceRow> {
        (0..Self::COUNT).map(Self::from_index)
    }

    pub fn to_evidence(self) -> Evidence {
        CHANCE.iter().zip(self.0).map(|(n, s)| (n.to_string(), s)).collect()
    }

    pub fn names(self) -> [&'static str; 4] {
        self.0.map(|s| BINS[s])
    }

    pub fn parse(fields: &[&str]) -> Option<Self> {
        if fields.len() != 4 {
            return None;
        }
        let mut out = [0; 4];
        for (slot, f) in out.iter_mut().zip(fields) {
            *slot = BINS.iter().position(|b| b == f)?;
        }
        Some(EvidenceRow(out))
    }
}

fn int_args<'a>(beliefs: &'a BeliefBase, functor: &str, arity: usize) -> impl Iterator<Item = &'a [Term]> + 'a {
    beliefs.with_signature(functor, arity, false).map(|l| l.args())
}

/// Reads the evidence off the belief base:
/// `gold_at(X,Y)` count, `allocated(Me,X,Y)` count for this agent,
/// own `carrying(N)`, and own carrying plus teammates' `team_carrying(Name,N)`.
pub fn extract_evidence(view: &AgentView) -> EvidenceRow {
    let b = view.beliefs;
    let detected = b.with_signature("gold_at", 2, false).count() as i64;
    let assigned = int_args(b, "allocated", 3).filter(|a| a[0].as_atom() == Some(view.name)).count() as i64;
    let own: i64 = int_args(b, "carrying", 1).filter_map(|a| a[0].as_int()).max().unwrap_or(0);
    let mates: i64 = int_args(b, "team_carrying", 2)
        .filter(|a| a[0].as_atom() != Some(view.name))
        .filter_map(|a| a[1].as_int())
        .sum();
    EvidenceRow([bin(detected), bin(assigned), bin(own), bin(own + mates)])
}

/// Current environment step from the `step(S)` percept, if any.
pub fn step_of(beliefs: &BeliefBase) -> Option<u64> {
    int_args(beliefs, "step", 1).filter_map(|a| a[0].as_int()).max().and_then(|s| u64::try_from(s).ok())
}
