use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariableKind {
    Observed,
    DerivedGrowth,
    DerivedDifference,
    DerivedDeflated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableEntry {
    pub code: String,
    pub kind: VariableKind,
    pub description: String,
}

/// Quantitative variables of an analysis, kept in lexicographic code order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<VariableEntry>", into = "Vec<VariableEntry>")]
pub struct VariableCatalog {
    entries: Vec<VariableEntry>,
}

impl VariableCatalog {
    pub fn new(mut entries: Vec<VariableEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.code.cmp(&b.code));
        if let Some(w) = entries.windows(2).find(|w| w[0].code == w[1].code) {
            return Err(Error::Catalog(format!("duplicate code `{}`", w[0].code)));
        }
        if let Some(e) = entries.iter().find(|e| e.code.trim().is_empty()) {
            return Err(Error::Catalog(format!("empty code for `{}`", e.description)));
        }
        Ok(Self { entries })
    }

    /// Catalog of observed variables with the given codes.
    pub fn observed<S: AsRef<str>>(codes: &[S]) -> Result<Self> {
        Self::new(
            codes
                .iter()
                .map(|c| VariableEntry {
                    code: c.as_ref().to_string(),
                    kind: VariableKind::Observed,
                    description: String::new(),
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[VariableEntry] {
        &self.entries
    }

    pub fn codes(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.code.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, code: &str) -> Option<&VariableEntry> {
        self.entries
            .binary_search_by(|e| e.code.as_str().cmp(code))
            .ok()
            .map(|i| &self.entries[i])
    }
}

impl TryFrom<Vec<VariableEntry>> for VariableCatalog {
    type Error = Error;

    fn try_from(entries: Vec<VariableEntry>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<VariableCatalog> for Vec<VariableEntry> {
    fn from(c: VariableCatalog) -> Self {
        c.entries
    }
}

/// The fifteen head-of-household variables used for the labor-market map.
pub fn default_catalog() -> VariableCatalog {
    use VariableKind::*;
    let raw = [
        ("AGEH", Observed, "age of the head of the household"),
        ("ANCH", Observed, "number of years worked since the age of 18"),
        ("GRSALH", DerivedGrowth, "annual growth of hourly wage"),
        ("HEXJH", Observed, "annual work hours in extra jobs"),
        ("HMJH", Observed, "annual work hours in main job"),
        ("HWMJH", Observed, "work hours per week in main job"),
        ("NBXJH", Observed, "number of extra jobs"),
        ("RSALH", DerivedDeflated, "real hourly wage"),
        ("SENH", Observed, "seniority in main job (months)"),
        ("SIZFAM", Observed, "family size"),
        ("VHWMJH", DerivedDifference, "variation of work hours per week in main job since baseline"),
        ("VWMJH", DerivedDifference, "variation of weeks of work in main job since baseline"),
        ("WMJH", Observed, "number of weeks of work in main job"),
        ("WOUTH", Observed, "number of weeks out of labor force"),
        ("WUNEH", Observed, "number of weeks of unemployment"),
    ];
    VariableCatalog::new(
        raw.iter()
            .map(|&(code, kind, description)| VariableEntry {
                code: code.into(),
                kind,
                description: description.into(),
            })
            .collect(),
    )
    .expect("default catalog codes are unique")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_is_sorted_and_complete() {
        let cat = default_catalog();
        let codes = cat.codes();
        assert_eq!(codes.len(), 15);
        let mut sorted = codes.clone();
        sorted.sort();
        assert_eq!(codes, sorted);
        assert_eq!(
            codes,
            [
                "AGEH", "ANCH", "GRSALH", "HEXJH", "HMJH", "HWMJH", "NBXJH", "RSALH", "SENH",
                "SIZFAM", "VHWMJH", "VWMJH", "WMJH", "WOUTH", "WUNEH"
            ]
        );
        let constructed = cat
            .entries()
            .iter()
            .filter(|e| matches!(e.kind, VariableKind::DerivedGrowth | VariableKind::DerivedDifference))
            .count();
        assert_eq!(constructed, 3);
    }

    #[test]
    fn duplicate_codes_rejected() {
        let err = VariableCatalog::observed(&["B", "A", "B"]).unwrap_err();
        assert!(matches!(err, Error::Catalog(_)));
    }

    #[test]
    fn lookup_by_code() {
        let cat = VariableCatalog::observed(&["Z", "A", "M"]).unwrap();
        assert_eq!(cat.codes(), ["A", "M", "Z"]);
        assert!(cat.get("M").is_some());
        assert!(cat.get("Q").is_none());
    }
}
