//! JSON model files. Field order is fixed by the struct declarations below.

use serde::{Deserialize, Serialize};

use crate::decision::{InfluenceDiagram, Utility};
use crate::error::{PgmError, Result};
use crate::factor::{DiscreteVariable, Factor};
use crate::network::{BayesianNetwork, BnStructure};

pub const FORMAT_TAG: &str = "pgm-model/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub variables: Vec<VariableEntry>,
    pub edges: Vec<(String, String)>,
    pub cpds: Vec<CpdEntry>,
    pub utility: Option<UtilityEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub name: String,
    pub kind: Kind,
    pub states: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Chance,
    Decision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpdEntry {
    pub variable: String,
    pub parents: Vec<String>,
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityEntry {
    pub name: String,
    pub parents: Vec<String>,
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Network(BayesianNetwork),
    Diagram(InfluenceDiagram),
}

impl Model {
    pub fn to_file(&self) -> ModelFile {
        let (bn, decision, utility) = match self {
            Model::Network(bn) => (bn, None, None),
            Model::Diagram(id) => (id.network(), Some(id.decision_name()), Some(id.utility())),
        };
        let s = bn.structure();
        let variables = s
            .variables()
            .iter()
            .map(|v| VariableEntry {
                name: v.name().to_owned(),
                kind: if Some(v.name()) == decision { Kind::Decision } else { Kind::Chance },
                states: v.states().to_vec(),
            })
            .collect();
        let cpds = s
            .variables()
            .iter()
            .zip(bn.cpds())
            .filter(|(v, _)| Some(v.name()) != decision)
            .map(|(v, f)| CpdEntry {
                variable: v.name().to_owned(),
                parents: s.parent_names(v.name()).expect("own variable").into_iter().map(str::to_owned).collect(),
                table: f.table().to_vec(),
            })
            .collect();
        ModelFile {
            format: FORMAT_TAG.to_owned(),
            variables,
            edges: s.edges().to_vec(),
            cpds,
            utility: utility.map(|u| UtilityEntry {
                name: u.name.clone(),
                parents: u.parents.clone(),
                table: u.values.clone(),
            }),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Model> {
        if file.format != FORMAT_TAG {
            return Err(PgmError::Format(format!("unsupported format `{}`", file.format)));
        }
        let decisions: Vec<&VariableEntry> = file.variables.iter().filter(|v| v.kind == Kind::Decision).collect();
        let variables: Vec<DiscreteVariable> = file
            .variables
            .iter()
            .map(|v| DiscreteVariable::new(v.name.clone(), v.states.clone()))
            .collect::<Result<_>>()?;
        let structure = BnStructure::new(variables, file.edges.clone())?;

        let mut cpds = Vec::new();
        for v in &file.variables {
            if v.kind == Kind::Decision {
                continue;
            }
            let entry = file
                .cpds
                .iter()
                .find(|c| c.variable == v.name)
                .ok_or_else(|| PgmError::Format(format!("no CPD for `{}`", v.name)))?;
            let expected: Vec<&str> = structure.parent_names(&v.name)?;
            if entry.parents.iter().map(String::as_str).collect::<Vec<_>>() != expected {
                return Err(PgmError::Format(format!(
                    "CPD parents of `{}` must be [{}] to match the edge list",
                    v.name,
                    expected.join(",")
                )));
            }
            let scope = structure.cpd_scope(structure.index_of(&v.name)?);
            cpds.push(Factor::new(scope, entry.table.clone())?);
        }
        if file.cpds.len() != cpds.len() {
            return Err(PgmError::Format("CPD listed for an unknown or decision variable".into()));
        }

        match (decisions.as_slice(), file.utility) {
            ([], None) => Ok(Model::Network(BayesianNetwork::new(structure, cpds)?)),
            ([d], Some(u)) => {
                let utility = Utility { name: u.name, parents: u.parents, values: u.table };
                Ok(Model::Diagram(InfluenceDiagram::new(structure, &d.name, cpds, utility)?))
            }
            ([], Some(_)) => Err(PgmError::Format("utility node without a decision variable".into())),
            (_, None) => Err(PgmError::Format("decision variable without a utility node".into())),
            _ => Err(PgmError::Format("more than one decision variable".into())),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| PgmError::Format(e.to_string()))?;
        Model::from_file(file)
    }
}

pub fn diagram_from_json(text: &str) -> Result<InfluenceDiagram> {
    match Model::from_json(text)? {
        Model::Diagram(id) => Ok(id),
        Model::Network(_) => Err(PgmError::Format("expected an influence diagram".into())),
    }
}

pub fn network_from_json(text: &str) -> Result<BayesianNetwork> {
    match Model::from_json(text)? {
        Model::Network(bn) => Ok(bn),
        Model::Diagram(_) => Err(PgmError::Format("expected a Bayesian network".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAGRAM: &str = r#"{
  "format": "pgm-model/1",
  "variables": [
    { "name": "D", "kind": "decision", "states": ["a1", "a2"] },
    { "name": "O", "kind": "chance", "states": ["bad", "good"] }
  ],
  "edges": [["D", "O"]],
  "cpds": [{ "variable": "O", "parents": ["D"], "table": [0.1, 0.9, 0.9, 0.1] }],
  "utility": { "name": "U", "parents": ["O"], "table": [0.0, 10.0] }
}"#;

    #[test]
    fn round_trip() {
        let id = diagram_from_json(DIAGRAM).unwrap();
        let text = Model::Diagram(id.clone()).to_json();
        assert_eq!(diagram_from_json(&text).unwrap(), id);
        // field order
        let f = text.find("\"format\"").unwrap();
        let v = text.find("\"variables\"").unwrap();
        let e = text.find("\"edges\"").unwrap();
        let c = text.find("\"cpds\"").unwrap();
        let u = text.find("\"utility\"").unwrap();
        assert!(f < v && v < e && e < c && c < u);
    }

    #[test]
    fn parent_mismatch() {
        let bad = DIAGRAM.replace(r#""parents": ["D"], "table""#, r#""parents": [], "table""#);
        assert!(matches!(diagram_from_json(&bad), Err(PgmError::Format(_))));
    }

    #[test]
    fn network_without_utility() {
        let text = r#"{"format":"pgm-model/1","variables":[{"name":"A","kind":"chance","states":["f","t"]}],
            "edges":[],"cpds":[{"variable":"A","parents":[],"table":[0.25,0.75]}],"utility":null}"#;
        let bn = network_from_json(text).unwrap();
        assert_eq!(network_from_json(&Model::Network(bn.clone()).to_json()).unwrap(), bn);
        assert!(diagram_from_json(text).is_err());
    }
}
