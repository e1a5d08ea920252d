//! Principal component analysis on the correlation matrix.
//!
//! Missing cells are handled with pairwise-complete correlations. When the
//! resulting matrix is not positive semidefinite its negative eigenvalues
//! are clipped to zero and the diagonal is rescaled back to one.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::ObservationMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    pub codes: Vec<String>,
    /// Descending, non-negative.
    pub eigenvalues: Vec<f64>,
    /// `loadings[variable][component]`; columns are orthonormal.
    pub loadings: Vec<Vec<f64>>,
    /// `scores[row][component]`, computed from the z-scored data with
    /// missing cells at zero.
    pub scores: Vec<Vec<f64>>,
    /// Cumulative share of variance explained by the first k+1 components.
    pub explained: Vec<f64>,
    /// Whether the pairwise correlation matrix needed a PSD repair.
    pub repaired: bool,
}

const SIGN_TIE: f64 = 1e-9;

struct ColumnStats {
    mean: f64,
    sd: f64,
}

fn column_stats(matrix: &ObservationMatrix, j: usize) -> Option<ColumnStats> {
    let (n, sum) = matrix.column(j).fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
    if n < 2 {
        return None;
    }
    let mean = sum / n as f64;
    let sd = (matrix.column(j).map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64).sqrt();
    (sd > 0.0).then_some(ColumnStats { mean, sd })
}

/// Pearson correlation over rows where both columns are observed.
fn pairwise_correlation(matrix: &ObservationMatrix, a: usize, b: usize) -> f64 {
    let pairs: Vec<(f64, f64)> = (0..matrix.n_rows())
        .filter_map(|i| Some((matrix.get(i, a)?, matrix.get(i, b)?)))
        .collect();
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return 0.0;
    }
    let (ma, mb) = pairs.iter().fold((0.0, 0.0), |(x, y), &(p, q)| (x + p / n, y + q / n));
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for &(p, q) in &pairs {
        sab += (p - ma) * (q - mb);
        saa += (p - ma) * (p - ma);
        sbb += (q - mb) * (q - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}

/// Eigenpairs sorted by descending eigenvalue.
fn sorted_eigen(c: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(c);
    let d = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(d, d, |i, k| eig.eigenvectors[(i, order[k])]);
    (values, vectors)
}

pub fn correlation_pca(matrix: &ObservationMatrix) -> Result<PcaResult> {
    let d = matrix.n_cols();
    if matrix.n_rows() < 2 || d < 2 {
        return Err(Error::config("PCA needs at least two rows and two variables"));
    }
    let stats = (0..d)
        .map(|j| column_stats(matrix, j).ok_or_else(|| Error::DegenerateVariable(matrix.codes()[j].clone())))
        .collect::<Result<Vec<_>>>()?;

    let mut corr = DMatrix::<f64>::identity(d, d);
    for a in 0..d {
        for b in a + 1..d {
            let r = pairwise_correlation(matrix, a, b);
            corr[(a, b)] = r;
            corr[(b, a)] = r;
        }
    }

    let (mut values, mut vectors) = sorted_eigen(corr.clone());
    let repaired = values.iter().any(|&v| v < -1e-12);
    if repaired {
        let clipped = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, values.iter().map(|v| v.max(0.0))));
        let psd = &vectors * clipped * vectors.transpose();
        let scale: Vec<f64> = (0..d).map(|i| psd[(i, i)].max(f64::MIN_POSITIVE).sqrt()).collect();
        let rescaled = DMatrix::from_fn(d, d, |i, j| if i == j { 1.0 } else { psd[(i, j)] / (scale[i] * scale[j]) });
        (values, vectors) = sorted_eigen(rescaled);
    }
    if values.iter().all(|&v| v <= 1e-12) {
        return Err(Error::Degenerate("correlation matrix has rank 0".into()));
    }
    let eigenvalues: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();

    // largest-magnitude loading of each component is positive; magnitudes
    // within SIGN_TIE of the maximum count as tied, lowest variable wins
    for k in 0..d {
        let col = vectors.column(k);
        let max = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let pivot = (0..d).find(|&i| col[i].abs() >= max - SIGN_TIE).expect("non-empty column");
        if col[pivot] < 0.0 {
            vectors.column_mut(k).neg_mut();
        }
    }
    let loadings: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|k| vectors[(i, k)]).collect()).collect();

    let scores = (0..matrix.n_rows())
        .map(|i| {
            let z: Vec<f64> = (0..d)
                .map(|j| matrix.get(i, j).map_or(0.0, |x| (x - stats[j].mean) / stats[j].sd))
                .collect();
            (0..d).map(|k| (0..d).map(|j| z[j] * loadings[j][k]).sum()).collect()
        })
        .collect();

    let total: f64 = eigenvalues.iter().sum();
    let explained = eigenvalues
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc / total)
        })
        .collect();

    Ok(PcaResult { codes: matrix.codes().to_vec(), eigenvalues, loadings, scores, explained, repaired })
}

/// Position of one variable on a pair of principal axes.
#[derive(Debug, Clone, PartialEq)]
pub struct VariablePoint {
    pub code: String,
    pub x: f64,
    pub y: f64,
}

/// Correlation-circle coordinates `loading × √eigenvalue` on two 0-based
/// components.
pub fn variable_projection(result: &PcaResult, axes: (usize, usize)) -> Result<Vec<VariablePoint>> {
    let m = result.eigenvalues.len();
    for a in [axes.0, axes.1] {
        if a >= m {
            return Err(Error::config(format!("axis {} out of range for {m} components", a + 1)));
        }
    }
    let (sa, sb) = (result.eigenvalues[axes.0].sqrt(), result.eigenvalues[axes.1].sqrt());
    Ok(result
        .codes
        .iter()
        .zip(&result.loadings)
        .map(|(code, l)| VariablePoint { code: code.clone(), x: l[axes.0] * sa, y: l[axes.1] * sb })
        .collect())
}

pub fn write_projection_csv<W: Write>(out: W, points: &[VariablePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variable", "x", "y"])?;
    for p in points {
        w.write_record([p.code.clone(), format!("{}", p.x), format!("{}", p.y)])?;
    }
    w.flush()?;
    Ok(())
}
