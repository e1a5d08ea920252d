use serde::{Deserialize, Serialize};

use super::one_based;
use crate::error::{Error, Result};
use crate::panel::Observation;
use crate::som::{
    bmu, init_codebook, quantization_error, train_online, CodeBook, InitMethod, Topology, TrainingSchedule,
};

/// Ordered grouping of map units into `k` super-classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperClassMap {
    pub k: usize,
    /// Super-class of each map unit (0-based here, 1-based when serialized).
    #[serde(with = "one_based")]
    pub unit_to_super: Vec<usize>,
    /// Trained chain whose unit order is the super-class order.
    pub chain_codebook: CodeBook,
    /// Super-classes that received no unit.
    #[serde(with = "one_based")]
    pub empty: Vec<usize>,
    pub quantization_error: f64,
    /// Index of the code-vector coordinate used to orient the chain.
    pub orientation: Option<usize>,
}

impl SuperClassMap {
    pub fn sizes_in_units(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &s in &self.unit_to_super {
            sizes[s] += 1;
        }
        sizes
    }

    /// Class names "1".."k".
    pub fn labels(&self) -> Vec<String> {
        (1..=self.k).map(|i| i.to_string()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOptions {
    pub k: usize,
    pub schedule: TrainingSchedule,
    /// Coordinate whose value must increase from super-class 1 to k.
    pub orientation: Option<usize>,
    /// Independent chain trainings (seeds `schedule.seed + r`); the one with
    /// the lowest quantization error is kept.
    pub restarts: usize,
}

impl ReductionOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        let topology = Topology::Chain { length: k.max(1) };
        Self { k, schedule: TrainingSchedule::default_for(&topology, seed), orientation: None, restarts: 10 }
    }
}

/// Clusters the code vectors of `codebook` with a 1D Kohonen chain of
/// length `k`, so that the resulting classes are ordered along the chain.
pub fn reduce_superclasses(codebook: &CodeBook, options: &ReductionOptions) -> Result<SuperClassMap> {
    let n = codebook.unit_count();
    let k = options.k;
    if k < 2 || k > n {
        return Err(Error::config(format!("k must lie in 2..={n}, got {k}")));
    }
    if let Some(o) = options.orientation {
        if o >= codebook.dimension() {
            return Err(Error::config(format!("orientation coordinate {o} out of range")));
        }
    }
    let codes: Vec<String> = (0..codebook.dimension()).map(|j| format!("c{j}")).collect();
    let data = codebook.as_matrix(codes)?;
    let topology = Topology::chain(k)?;

    let mut chain = if k == n {
        nearest_neighbor_path(codebook, options.orientation)?
    } else {
        let mut best: Option<(f64, CodeBook)> = None;
        for r in 0..options.restarts.max(1) as u64 {
            let seed = options.schedule.seed.wrapping_add(r);
            let init = init_codebook(topology, &data, seed, InitMethod::Sample)?;
            let schedule = TrainingSchedule { seed, ..options.schedule.clone() };
            let trained = train_online(&init, &data, &schedule)?.codebook;
            let qe = quantization_error(&trained, &data)?;
            if best.as_ref().is_none_or(|(b, _)| qe < *b) {
                best = Some((qe, trained));
            }
        }
        best.expect("at least one restart").1
    };

    if let Some(o) = options.orientation {
        if chain.vector(0)[o] > chain.vector(k - 1)[o] {
            chain = reversed(&chain)?;
        }
    }

    let all = vec![false; codebook.dimension()];
    let unit_to_super = codebook
        .vectors()
        .map(|v| bmu(&chain, Observation::new(v, &all)).map(|(u, _)| u))
        .collect::<Result<Vec<_>>>()?;
    let mut sizes = vec![0usize; k];
    for &s in &unit_to_super {
        sizes[s] += 1;
    }
    let empty = (0..k).filter(|&s| sizes[s] == 0).collect();
    let quantization_error = quantization_error(&chain, &data)?;
    Ok(SuperClassMap {
        k,
        unit_to_super,
        chain_codebook: chain,
        empty,
        quantization_error,
        orientation: options.orientation,
    })
}

fn reversed(chain: &CodeBook) -> Result<CodeBook> {
    let vectors: Vec<Vec<f64>> = chain.vectors().rev().map(<[f64]>::to_vec).collect();
    CodeBook::from_vectors(*chain.topology(), &vectors)
}

/// One class per unit, chained greedily by nearest code vector starting
/// from the unit lowest on the orientation coordinate (or unit 0).
fn nearest_neighbor_path(codebook: &CodeBook, orientation: Option<usize>) -> Result<CodeBook> {
    let n = codebook.unit_count();
    let dist2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let start = match orientation {
        Some(o) => (0..n)
            .min_by(|&a, &b| codebook.vector(a)[o].total_cmp(&codebook.vector(b)[o]))
            .unwrap_or(0),
        None => 0,
    };
    let mut used = vec![false; n];
    let mut path = vec![start];
    used[start] = true;
    while path.len() < n {
        let cur = codebook.vector(*path.last().expect("non-empty path"));
        let next = (0..n)
            .filter(|&u| !used[u])
            .min_by(|&a, &b| dist2(cur, codebook.vector(a)).total_cmp(&dist2(cur, codebook.vector(b))))
            .expect("unvisited unit remains");
        used[next] = true;
        path.push(next);
    }
    let vectors: Vec<Vec<f64>> = path.iter().map(|&u| codebook.vector(u).to_vec()).collect();
    CodeBook::from_vectors(Topology::chain(n)?, &vectors)
}
