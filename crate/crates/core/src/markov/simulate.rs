use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distribution::Distribution;
use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};
use crate::trajectory::TrajectorySet;

pub(crate) fn draw<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let u: f64 = rng.random::<f64>() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // rounding can leave u at the very top; take the last state with mass
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Samples `n_individuals` independent trajectories of `steps` states from
/// the chain, years numbered 1..=steps.
pub fn simulate_chain(
    matrix: &TransitionMatrix,
    initial: &Distribution,
    steps: usize,
    n_individuals: usize,
    seed: u64,
) -> Result<TrajectorySet> {
    if !matrix.is_stochastic(1e-9) {
        return Err(Error::Domain("simulation needs a row-stochastic matrix".into()));
    }
    if initial.alphabet != matrix.alphabet {
        return Err(Error::config("initial distribution and matrix use different alphabets"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Vec::with_capacity(steps * n_individuals);
    for _ in 0..n_individuals {
        if steps == 0 {
            break;
        }
        let mut s = draw(&mut rng, &initial.p);
        labels.push(s);
        for _ in 1..steps {
            s = draw(&mut rng, &matrix.p[s]);
            labels.push(s);
        }
    }
    TrajectorySet::new(
        (0..n_individuals).map(|i| format!("sim{i}")).collect(),
        (1..=steps as i32).collect(),
        matrix.alphabet.clone(),
        labels,
    )
}
