//! Panel ingestion, derived variables, year pooling and standardization.

mod catalog;
mod dataset;
mod derive;
mod load;
mod matrix;
mod standardize;

pub use catalog::{default_catalog, VariableCatalog, VariableEntry, VariableKind};
pub use dataset::PanelDataset;
pub use derive::{deflate, derive_difference, derive_growth_rate};
pub use load::{load_deflators, load_panel, write_panel, LoadOptions};
pub use matrix::{pool_years, Observation, ObservationMatrix, RowOrigin};
pub use standardize::{apply_standardization, fit_standardization, StandardizationParams};
