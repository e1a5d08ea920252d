use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::schedule::TrainingSchedule;
use super::topology::Topology;
use crate::error::{Error, Result};
use crate::panel::{Observation, ObservationMatrix, StandardizationParams};

/// Code vectors of a map, stored row-major (unit × dimension).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCodeBook")]
pub struct CodeBook {
    topology: Topology,
    dimension: usize,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCodeBook {
    topology: Topology,
    dimension: usize,
    weights: Vec<f64>,
}

impl TryFrom<RawCodeBook> for CodeBook {
    type Error = Error;

    fn try_from(raw: RawCodeBook) -> Result<Self> {
        CodeBook::new(raw.topology, raw.dimension, raw.weights)
    }
}

impl CodeBook {
    pub fn new(topology: Topology, dimension: usize, weights: Vec<f64>) -> Result<Self> {
        topology.validate()?;
        if dimension == 0 {
            return Err(Error::config("code vectors need at least one dimension"));
        }
        if weights.len() != topology.unit_count() * dimension {
            return Err(Error::config(format!(
                "expected {} weights for {} units of dimension {dimension}, got {}",
                topology.unit_count() * dimension,
                topology.unit_count(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::config("code vectors must be finite"));
        }
        Ok(Self { topology, dimension, weights })
    }

    pub fn from_vectors(topology: Topology, vectors: &[Vec<f64>]) -> Result<Self> {
        let dimension = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dimension) {
            return Err(Error::config("code vectors differ in length"));
        }
        Self::new(topology, dimension, vectors.concat())
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn unit_count(&self) -> usize {
        self.topology.unit_count()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vector(&self, unit: usize) -> &[f64] {
        &self.weights[unit * self.dimension..(unit + 1) * self.dimension]
    }

    pub(crate) fn vector_mut(&mut self, unit: usize) -> &mut [f64] {
        &mut self.weights[unit * self.dimension..(unit + 1) * self.dimension]
    }

    pub fn vectors(&self) -> impl DoubleEndedIterator<Item = &[f64]> + ExactSizeIterator {
        self.weights.chunks(self.dimension)
    }

    /// Code vectors as a fully observed matrix, one row per unit.
    pub fn as_matrix(&self, codes: Vec<String>) -> Result<ObservationMatrix> {
        if codes.len() != self.dimension {
            return Err(Error::config("code count does not match codebook dimension"));
        }
        let rows: Vec<Vec<f64>> = self.vectors().map(<[f64]>::to_vec).collect();
        ObservationMatrix::from_dense(codes, &rows)
    }

    /// Mean Euclidean distance between code vectors of grid-adjacent units,
    /// and over all unit pairs. An organized map has the first well below
    /// the second.
    pub fn neighbor_contrast(&self) -> (f64, f64) {
        let dist = |a: usize, b: usize| {
            self.vector(a)
                .iter()
                .zip(self.vector(b))
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        let adjacent = self.topology.adjacent_pairs();
        let adj_mean = adjacent.iter().map(|&(a, b)| dist(a, b)).sum::<f64>() / adjacent.len().max(1) as f64;
        let n = self.unit_count();
        let (mut sum, mut count) = (0.0, 0usize);
        for a in 0..n {
            for b in a + 1..n {
                sum += dist(a, b);
                count += 1;
            }
        }
        (adj_mean, sum / count.max(1) as f64)
    }
}

/// Best-matching unit by partial Euclidean distance over the observation's
/// observed coordinates; ties go to the lowest unit index.
pub fn bmu(codebook: &CodeBook, observation: Observation<'_>) -> Result<(usize, f64)> {
    if observation.dimension() != codebook.dimension() {
        return Err(Error::config(format!(
            "observation has dimension {}, codebook {}",
            observation.dimension(),
            codebook.dimension()
        )));
    }
    let observed: Vec<(usize, f64)> = observation.observed().collect();
    if observed.is_empty() {
        return Err(Error::EmptyObservation { context: None });
    }
    Ok(bmu_observed(codebook, &observed))
}

pub(crate) fn bmu_observed(codebook: &CodeBook, observed: &[(usize, f64)]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (u, w) in codebook.vectors().enumerate() {
        let d2: f64 = observed.iter().map(|&(j, x)| (x - w[j]) * (x - w[j])).sum();
        if d2 < best.1 {
            best = (u, d2);
        }
    }
    (best.0, best.1.sqrt())
}

/// Mean BMU distance over the rows of `data`.
pub fn quantization_error(codebook: &CodeBook, data: &ObservationMatrix) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::config("quantization error of an empty dataset"));
    }
    let mut total = 0.0;
    for row in data.rows() {
        total += bmu(codebook, row)?.1;
    }
    Ok(total / data.n_rows() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    /// Random data rows (with replacement), missing cells filled with the
    /// variable's observed mean.
    Sample,
    /// Uniform draws inside the per-variable observed range.
    UniformBox,
}

pub fn init_codebook(topology: Topology, data: &ObservationMatrix, seed: u64, method: InitMethod) -> Result<CodeBook> {
    topology.validate()?;
    if data.is_empty() || data.n_cols() == 0 {
        return Err(Error::config("cannot initialize a codebook from empty data"));
    }
    let d = data.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(topology.unit_count() * d);
    match method {
        InitMethod::Sample => {
            let means: Vec<f64> = (0..d)
                .map(|j| {
                    let (n, s) = data.column(j).fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
                    if n == 0 {
                        0.0
                    } else {
                        s / n as f64
                    }
                })
                .collect();
            for _ in 0..topology.unit_count() {
                let i = rng.random_range(0..data.n_rows());
                weights.extend((0..d).map(|j| data.get(i, j).unwrap_or(means[j])));
            }
        }
        InitMethod::UniformBox => {
            let bounds: Vec<(f64, f64)> = (0..d)
                .map(|j| {
                    data.column(j)
                        .fold(None, |acc: Option<(f64, f64)>, x| match acc {
                            None => Some((x, x)),
                            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
                        })
                        .unwrap_or((0.0, 0.0))
                })
                .collect();
            for _ in 0..topology.unit_count() {
                weights.extend(bounds.iter().map(|&(lo, hi)| {
                    if hi > lo {
                        rng.random_range(lo..=hi)
                    } else {
                        lo
                    }
                }));
            }
        }
    }
    CodeBook::new(topology, d, weights)
}

/// Everything needed to reproduce projections with a trained map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeBookDocument {
    pub topology: Topology,
    pub dimension: usize,
    /// Row-major unit × dimension weights.
    pub weights: Vec<f64>,
    pub codes: Vec<String>,
    pub standardization: Option<StandardizationParams>,
    pub seed: u64,
    pub init: InitMethod,
    pub schedule: TrainingSchedule,
    #[serde(default)]
    pub quantization_errors: Vec<f64>,
}

impl CodeBookDocument {
    pub fn codebook(&self) -> Result<CodeBook> {
        if self.codes.len() != self.dimension {
            return Err(Error::config("codebook document: code count does not match dimension"));
        }
        if let Some(p) = &self.standardization {
            if p.codes != self.codes {
                return Err(Error::config("codebook document: standardization codes differ from map codes"));
            }
        }
        CodeBook::new(self.topology, self.dimension, self.weights.clone())
    }
}
