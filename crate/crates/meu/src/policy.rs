//! Static deliberation policy: the MEU choice for every evidence row and
//! every non-empty set of available classes, computed once.

use pgm::{meu_decide_restricted, InfluenceDiagram};
use serde::{Deserialize, Serialize};

use crate::class::{ClassSet, IntentionClass};
use crate::diagram::diagram_hash;
use crate::error::{MeuError, Result};
use crate::evidence::EvidenceRow;

pub const POLICY_FORMAT: &str = "miners-policy/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub diagram_sha256: String,
    /// Seconds since the Unix epoch.
    pub built_at: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledPolicy {
    /// `EvidenceRow::COUNT` rows of 63 choices, subset mask minus one.
    table: Vec<IntentionClass>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    format: String,
    diagram_sha256: String,
    built_at: u64,
    classes: Vec<String>,
    /// One line per evidence row; entry `m-1` is the class index chosen from subset mask `m`.
    table: Vec<Vec<u8>>,
}

fn slot(row: EvidenceRow, subset: ClassSet) -> usize {
    row.index() * ClassSet::NON_EMPTY + subset.bits() as usize - 1
}

/// One MEU decision restricted to `subset`.
pub fn decide(id: &InfluenceDiagram, row: EvidenceRow, subset: ClassSet) -> Result<IntentionClass> {
    let (k, _) = meu_decide_restricted(id, &row.to_evidence(), &subset.indices())?;
    Ok(IntentionClass::from_index(k).expect("decision domain is the class list"))
}

/// Tabulates the policy. Expected utilities are computed once per evidence
/// row; each subset takes the restricted argmax of that vector.
pub fn compile_policy(id: &InfluenceDiagram, built_at: u64) -> Result<CompiledPolicy> {
    let mut table = Vec::with_capacity(EvidenceRow::COUNT * ClassSet::NON_EMPTY);
    for row in EvidenceRow::all() {
        let eu = id.expected_utilities(&row.to_evidence())?;
        for subset in ClassSet::all_non_empty() {
            let k = pgm::argmax_among(&eu, &subset.indices()).expect("non-empty");
            table.push(IntentionClass::from_index(k).expect("class index"));
        }
    }
    Ok(CompiledPolicy { table, provenance: Provenance { diagram_sha256: diagram_hash(id), built_at } })
}

impl CompiledPolicy {
    pub fn lookup(&self, row: EvidenceRow, subset: ClassSet) -> Option<IntentionClass> {
        if subset.is_empty() {
            return None;
        }
        Some(self.table[slot(row, subset)])
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Same choices, ignoring provenance.
    pub fn same_table(&self, other: &CompiledPolicy) -> bool {
        self.table == other.table
    }

    pub fn to_json(&self) -> String {
        let file = PolicyFile {
            format: POLICY_FORMAT.into(),
            diagram_sha256: self.provenance.diagram_sha256.clone(),
            built_at: self.provenance.built_at,
            classes: IntentionClass::ALL.iter().map(|c| c.name().to_owned()).collect(),
            table: self
                .table
                .chunks(ClassSet::NON_EMPTY)
                .map(|r| r.iter().map(|c| c.index() as u8).collect())
                .collect(),
        };
        // one evidence row per line keeps the file readable
        let rows: Vec<String> = file.table.iter().map(|r| serde_json::to_string(r).expect("ints")).collect();
        format!(
            "{{\n  \"format\": {},\n  \"diagram_sha256\": {},\n  \"built_at\": {},\n  \"classes\": {},\n  \"table\": [\n    {}\n  ]\n}}\n",
            serde_json::to_string(&file.format).expect("string"),
            serde_json::to_string(&file.diagram_sha256).expect("string"),
            file.built_at,
            serde_json::to_string(&file.classes).expect("strings"),
            rows.join(",\n    ")
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolicyFile = serde_json::from_str(text).map_err(|e| MeuError::Policy(e.to_string()))?;
        if file.format != POLICY_FORMAT {
            return Err(MeuError::Policy(format!("unsupported format `{}`", file.format)));
        }
        let names: Vec<&str> = IntentionClass::ALL.iter().map(|c| c.name()).collect();
        if file.classes != names {
            return Err(MeuError::Policy(format!("class list must be {names:?}")));
        }
        if file.table.len() != EvidenceRow::COUNT {
            return Err(MeuError::Policy(format!(
                "{} evidence rows, expected {}",
                file.table.len(),
                EvidenceRow::COUNT
            )));
        }
        let mut table = Vec::with_capacity(EvidenceRow::COUNT * ClassSet::NON_EMPTY);
        for (r, row) in file.table.iter().enumerate() {
            if row.len() != ClassSet::NON_EMPTY {
                return Err(MeuError::Policy(format!("row {r} has {} entries", row.len())));
            }
            for (m, &k) in row.iter().enumerate() {
                let c = IntentionClass::from_index(k as usize)
                    .ok_or_else(|| MeuError::Policy(format!("row {r}: class index {k}")))?;
                if !ClassSet::from_bits(m as u8 + 1).expect("mask").contains(c) {
                    return Err(MeuError::Policy(format!("row {r}, subset {}: choice `{c}` not available", m + 1)));
                }
                table.push(c);
            }
        }
        Ok(CompiledPolicy {
            table,
            provenance: Provenance { diagram_sha256: file.diagram_sha256, built_at: file.built_at },
        })
    }

    /// Whether this policy was compiled from `id`.
    pub fn matches(&self, id: &InfluenceDiagram) -> bool {
        self.provenance.diagram_sha256 == diagram_hash(id)
    }
}
