//! On-disk documents for categories and presheaves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<CompositionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// `result = g∘f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub g: String,
    pub f: String,
    pub result: String,
}

/// A presheaf: element names per object, and for each morphism `f: c′ → c`
/// the map `X(c) → X(c′)`. Actions of identities may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafFile {
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}
