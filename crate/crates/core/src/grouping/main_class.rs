use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::superclass::SuperClassMap;
use crate::error::{Error, Result};

/// Merge of super-classes (1-based keys) into named main classes.
///
/// Serialized as a JSON object such as `{"1": "A", "2": "B"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, String>", into = "BTreeMap<usize, String>")]
pub struct MainClassMap {
    super_to_main: BTreeMap<usize, String>,
}

impl MainClassMap {
    pub fn new(super_to_main: BTreeMap<usize, String>) -> Result<Self> {
        if super_to_main.contains_key(&0) {
            return Err(Error::config("super-class indices are 1-based"));
        }
        Ok(Self { super_to_main })
    }

    /// A = {1, 3}, B = {2, 4, 5}, C = {6}, D = {7}.
    pub fn default_seven() -> Self {
        let pairs = [(1, "A"), (3, "A"), (2, "B"), (4, "B"), (5, "B"), (6, "C"), (7, "D")];
        Self { super_to_main: pairs.iter().map(|&(s, m)| (s, m.to_string())).collect() }
    }

    /// Each super-class keeps its own number as main-class name.
    pub fn identity(k: usize) -> Self {
        Self { super_to_main: (1..=k).map(|s| (s, s.to_string())).collect() }
    }

    /// Main-class names in ascending order; integer names sort numerically
    /// and before any others.
    pub fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.super_to_main.values().cloned().collect();
        labels.sort_by_key(|l| (l.parse::<u64>().map_or((1, 0), |v| (0, v)), l.clone()));
        labels.dedup();
        labels
    }

    pub fn get(&self, super_class: usize) -> Option<&str> {
        self.super_to_main.get(&super_class).map(String::as_str)
    }

    /// 0-based lookup table from super-class index to index in
    /// [`labels`](Self::labels); fails unless every class 1..=k is mapped.
    pub fn lookup(&self, k: usize) -> Result<Vec<usize>> {
        let labels = self.labels();
        (1..=k)
            .map(|s| {
                let name = self
                    .get(s)
                    .ok_or_else(|| Error::config(format!("super-class {s} has no main class")))?;
                Ok(labels.iter().position(|l| l == name).expect("label collected from map"))
            })
            .collect()
    }
}

impl TryFrom<BTreeMap<usize, String>> for MainClassMap {
    type Error = Error;

    fn try_from(m: BTreeMap<usize, String>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<MainClassMap> for BTreeMap<usize, String> {
    fn from(m: MainClassMap) -> Self {
        m.super_to_main
    }
}

/// Relabels 0-based super-class labels to 0-based main-class labels
/// (indices into `main.labels()`).
pub fn map_main_classes(map: &SuperClassMap, main: &MainClassMap, super_labels: &[usize]) -> Result<Vec<usize>> {
    let table = main.lookup(map.k)?;
    super_labels
        .iter()
        .map(|&s| {
            table
                .get(s)
                .copied()
                .ok_or_else(|| Error::config(format!("super-class label {} out of range", s + 1)))
        })
        .collect()
}
