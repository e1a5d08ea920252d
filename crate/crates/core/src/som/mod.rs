//! Kohonen self-organizing maps on 2D grids and 1D chains.
//!
//! Distances between observations and code vectors are partial: only the
//! observed coordinates of the observation take part, and training updates
//! skip missing coordinates as well.

mod codebook;
mod schedule;
mod topology;
mod train;

pub use codebook::{bmu, init_codebook, quantization_error, CodeBook, CodeBookDocument, InitMethod};
pub use schedule::{Annealing, Decay, TrainingSchedule};
pub use topology::{neighborhood_weight, Kernel, Topology};
pub use train::{train_batch, train_online, TrainOutcome};
