use std::collections::BTreeMap;

use medial_core::equations::Counterexample;
use medial_core::linearize::{PredicateCheck, RepresentationReport};
use medial_core::RelationCheck;
use serde::{Deserialize, Serialize};

use crate::tablefile::LoadedTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl From<&LoadedTable> for InputDigest {
    fn from(t: &LoadedTable) -> Self {
        InputDigest {
            path: t.path.clone(),
            sha256: t.sha256.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    pub belousov: bool,
}

/// Satisfaction vector and structural flags of one table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub entries: BTreeMap<String, bool>,
    pub properties: BTreeMap<String, bool>,
}

/// Machine-readable result of `check`, `classify` and `linearize`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<PredicateCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: &[&LoadedTable]) -> Self {
        Report {
            command: command.to_string(),
            inputs: inputs.iter().map(|t| (*t).into()).collect(),
            ..Default::default()
        }
    }

    /// Pretty JSON with object keys in sorted order and a trailing newline.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Serializes through `serde_json::Value`, whose maps are ordered by key.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}
