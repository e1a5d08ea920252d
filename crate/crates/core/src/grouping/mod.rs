//! Reduction of a trained map to ordered super-classes, merging into main
//! classes, and per-class profiles.

mod main_class;
mod profile;
mod superclass;

pub use main_class::{map_main_classes, MainClassMap};
pub use profile::{class_means, qualitative_frequencies, ClassMeans, FrequencyTable};
pub use superclass::{reduce_superclasses, ReductionOptions, SuperClassMap};

/// Serde adapter writing 0-based indices as 1-based numbers.
pub(crate) mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        raw.into_iter()
            .map(|x| x.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
            .collect()
    }
}
