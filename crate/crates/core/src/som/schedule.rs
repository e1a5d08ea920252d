use serde::{Deserialize, Serialize};

use super::topology::{Kernel, Topology};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decay {
    Linear,
    Exponential,
}

/// A parameter interpolated from `start` to `end` over training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annealing {
    pub start: f64,
    pub end: f64,
    pub decay: Decay,
}

impl Annealing {
    pub fn constant(value: f64) -> Self {
        Self { start: value, end: value, decay: Decay::Linear }
    }

    pub fn linear(start: f64, end: f64) -> Self {
        Self { start, end, decay: Decay::Linear }
    }

    /// Value at `progress` in [0, 1].
    pub fn at(&self, progress: f64) -> f64 {
        let f = progress.clamp(0.0, 1.0);
        match self.decay {
            Decay::Linear => self.start + (self.end - self.start) * f,
            Decay::Exponential => self.start * (self.end / self.start).powf(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSchedule {
    pub epochs: usize,
    pub learning_rate: Annealing,
    pub radius: Annealing,
    pub kernel: Kernel,
    pub seed: u64,
    pub shuffle: bool,
}

impl TrainingSchedule {
    /// 50 epochs, learning rate 0.5 → 0.01 and radius extent/2 → 0, both
    /// linear, hard kernel, shuffled presentation.
    pub fn default_for(topology: &Topology, seed: u64) -> Self {
        Self {
            epochs: 50,
            learning_rate: Annealing::linear(0.5, 0.01),
            radius: Annealing::linear(topology.extent() as f64 / 2.0, 0.0),
            kernel: Kernel::Hard,
            seed,
            shuffle: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::config("epochs must be at least 1"));
        }
        let lr = &self.learning_rate;
        if !(lr.end > 0.0 && lr.end <= lr.start && lr.start.is_finite()) {
            return Err(Error::config(format!(
                "learning rate must satisfy 0 < end <= start, got {} -> {}",
                lr.start, lr.end
            )));
        }
        let r = &self.radius;
        if !(r.end >= 0.0 && r.end <= r.start && r.start.is_finite()) {
            return Err(Error::config(format!(
                "radius must satisfy 0 <= end <= start, got {} -> {}",
                r.start, r.end
            )));
        }
        if r.decay == Decay::Exponential && r.end == 0.0 {
            return Err(Error::config("exponential radius decay needs a positive end radius"));
        }
        Ok(())
    }
}
