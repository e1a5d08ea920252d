//! Self-organizing-map classification of longitudinal panel records,
//! ordered super-class reduction, trajectory construction and Markov-chain
//! analysis of transitions between classes.
//!
//! The pipeline runs in this order:
//!
//! 1. [`panel`]: ingest a CSV panel, derive growth/difference/deflated
//!    variables, pool selected years and standardize.
//! 2. [`som`]: train a 2D Kohonen map on the pooled matrix.
//! 3. [`grouping`]: reduce the code vectors to ordered super-classes with a
//!    1D Kohonen chain and merge them into main classes.
//! 4. [`trajectory`]: project every (individual, year) record onto the map
//!    and build label sequences.
//! 5. [`markov`]: count transitions, estimate the transition matrix and its
//!    stationary distribution.
//!
//! [`pca`] provides the variable diagnostics and [`synth`] generates panels
//! with known latent dynamics for end-to-end validation.

pub mod error;
pub mod grouping;
pub mod markov;
pub mod panel;
pub mod pca;
pub mod som;
pub mod synth;
pub mod trajectory;

pub use error::{Error, Result};
