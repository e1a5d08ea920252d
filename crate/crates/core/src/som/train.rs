use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::codebook::{bmu_observed, quantization_error, CodeBook};
use super::schedule::TrainingSchedule;
use super::topology::neighborhood_weight;
use crate::error::{Error, Result};
use crate::panel::ObservationMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub codebook: CodeBook,
    /// Quantization error measured after each epoch.
    pub quantization_errors: Vec<f64>,
}

fn observed_rows(codebook: &CodeBook, data: &ObservationMatrix) -> Result<Vec<Vec<(usize, f64)>>> {
    if data.n_cols() != codebook.dimension() {
        return Err(Error::config(format!(
            "data has {} variables, codebook dimension is {}",
            data.n_cols(),
            codebook.dimension()
        )));
    }
    if data.is_empty() {
        return Err(Error::config("cannot train on empty data"));
    }
    data.rows()
        .enumerate()
        .map(|(i, row)| {
            let observed: Vec<(usize, f64)> = row.observed().collect();
            if observed.is_empty() {
                Err(Error::EmptyObservation { context: Some(format!("row {i}")) })
            } else {
                Ok(observed)
            }
        })
        .collect()
}

/// Sequential Kohonen training: each presented row pulls its best-matching
/// unit and that unit's neighbors toward it.
///
/// Learning rate and radius are interpolated over the total number of
/// presentations. Only the row's observed coordinates are updated.
pub fn train_online(codebook: &CodeBook, data: &ObservationMatrix, schedule: &TrainingSchedule) -> Result<TrainOutcome> {
    schedule.validate()?;
    let rows = observed_rows(codebook, data)?;
    let mut cb = codebook.clone();
    let topology = *cb.topology();
    let units = cb.unit_count();
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let total = schedule.epochs * rows.len();
    let last = (total - 1).max(1) as f64;
    let mut trace = Vec::with_capacity(schedule.epochs);
    let mut step = 0usize;
    for _ in 0..schedule.epochs {
        if schedule.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            let progress = step as f64 / last;
            let eta = schedule.learning_rate.at(progress);
            let radius = schedule.radius.at(progress);
            let row = &rows[i];
            let (winner, _) = bmu_observed(&cb, row);
            for u in 0..units {
                let h = neighborhood_weight(schedule.kernel, radius, topology.distance_unchecked(winner, u));
                if h == 0.0 {
                    continue;
                }
                let rate = eta * h;
                let w = cb.vector_mut(u);
                for &(j, x) in row {
                    w[j] += rate * (x - w[j]);
                }
            }
            step += 1;
        }
        trace.push(quantization_error(&cb, data)?);
    }
    Ok(TrainOutcome { codebook: cb, quantization_errors: trace })
}

/// Batch Kohonen training: each epoch assigns every row to its BMU, then
/// replaces each code vector by the neighborhood-weighted mean of the rows.
///
/// The radius is interpolated per epoch; the learning rate is unused. At
/// radius 0 one epoch is exactly one Lloyd (k-means) iteration. Coordinates
/// that receive no weight keep their previous value.
pub fn train_batch(codebook: &CodeBook, data: &ObservationMatrix, schedule: &TrainingSchedule) -> Result<TrainOutcome> {
    schedule.validate()?;
    let rows = observed_rows(codebook, data)?;
    let mut cb = codebook.clone();
    let topology = *cb.topology();
    let units = cb.unit_count();
    let d = cb.dimension();
    let last = (schedule.epochs - 1).max(1) as f64;
    let mut trace = Vec::with_capacity(schedule.epochs);
    for epoch in 0..schedule.epochs {
        let radius = schedule.radius.at(epoch as f64 / last);
        let winners: Vec<usize> = rows.iter().map(|r| bmu_observed(&cb, r).0).collect();
        // rows sharing a winner contribute identically, so aggregate per winner first
        let mut sums = vec![0.0; units * d];
        let mut counts = vec![0.0; units * d];
        for (row, &w) in rows.iter().zip(&winners) {
            for &(j, x) in row {
                sums[w * d + j] += x;
                counts[w * d + j] += 1.0;
            }
        }
        let kernel: Vec<f64> = (0..units * units)
            .map(|k| neighborhood_weight(schedule.kernel, radius, topology.distance_unchecked(k / units, k % units)))
            .collect();
        for u in 0..units {
            let w = cb.vector_mut(u);
            for (j, wj) in w.iter_mut().enumerate() {
                let (mut num, mut den) = (0.0, 0.0);
                for v in 0..units {
                    let h = kernel[v * units + u];
                    if h > 0.0 {
                        num += h * sums[v * d + j];
                        den += h * counts[v * d + j];
                    }
                }
                if den > 0.0 {
                    *wj = num / den;
                }
            }
        }
        trace.push(quantization_error(&cb, data)?);
    }
    Ok(TrainOutcome { codebook: cb, quantization_errors: trace })
}
