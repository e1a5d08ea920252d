use nalgebra::{DMatrix, DVector};

use super::distribution::Distribution;
use super::matrix::{is_irreducible, TransitionMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    /// Bound on `max |πP - λπ|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub distribution: Distribution,
    /// Dominant eigenvalue; 1 for a row-stochastic matrix.
    pub eigenvalue: f64,
    pub iterations: usize,
    /// Whether the averaged iteration was needed (periodic chains).
    pub averaged: bool,
    /// Final `max |πP - λπ|`.
    pub residual: f64,
    /// Largest difference against the direct solve of `(Pᵀ - λI)π = 0`,
    /// `Σπ = 1`; `None` if that system was singular.
    pub linear_solve_gap: Option<f64>,
    pub warnings: Vec<String>,
}

/// Returns `(πP, max |πP - λπ|, λ)` with `λ = Σ(πP)`.
fn step(p: &[Vec<f64>], pi: &[f64]) -> (Vec<f64>, f64, f64) {
    let n = pi.len();
    let mut y = vec![0.0; n];
    for (i, &w) in pi.iter().enumerate() {
        if w != 0.0 {
            for (yj, &pij) in y.iter_mut().zip(&p[i]) {
                *yj += w * pij;
            }
        }
    }
    let lambda: f64 = y.iter().sum();
    let residual = y.iter().zip(pi).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max);
    (y, residual, lambda)
}

/// Iterations without a 1% improvement of the best residual before the
/// plain power iteration is judged oscillating.
const STALL_WINDOW: usize = 1000;

/// Dominant left eigenvector of a non-negative irreducible matrix,
/// normalized to sum to one, by power iteration.
///
/// Plain iteration is tried first. If it stops improving, as on periodic
/// chains, it switches to averaging each iterate with its image
/// (`π ← (π + πP/λ) / 2`), which has the same fixed point and no
/// oscillation. Matrices whose rows do not sum to one are solved as a
/// general eigenproblem and flagged in `warnings`.
pub fn stationary_distribution(matrix: &TransitionMatrix, options: StationaryOptions) -> Result<Stationary> {
    if !is_irreducible(matrix) {
        return Err(Error::Reducible);
    }
    let n = matrix.size();
    let mut warnings = Vec::new();
    let deviation = matrix.max_row_sum_deviation();
    if deviation > 1e-9 {
        warnings.push(format!(
            "matrix is not row-stochastic (largest row-sum deviation {deviation:.4}); solved as a non-negative eigenproblem"
        ));
    }

    let mut pi = vec![1.0 / n as f64; n];
    let mut averaged = false;
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    let mut iterations = 0;
    let (mut residual, mut lambda);
    loop {
        let (y, r, l) = step(&matrix.p, &pi);
        residual = r;
        lambda = l;
        if residual <= options.tol || lambda == 0.0 {
            break;
        }
        if iterations >= options.max_iter {
            return Err(Error::NonConvergence { iterations, residual });
        }
        if averaged {
            for (a, b) in pi.iter_mut().zip(&y) {
                *a = 0.5 * (*a + b / lambda);
            }
        } else {
            for (a, b) in pi.iter_mut().zip(&y) {
                *a = b / lambda;
            }
            if residual < 0.99 * best {
                best = residual;
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= STALL_WINDOW {
                    averaged = true;
                }
            }
        }
        // renormalize against drift
        let s: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|x| *x /= s);
        iterations += 1;
    }
    if averaged {
        warnings.push("plain power iteration oscillated; used averaged iterates".into());
    }

    let linear_solve_gap = linear_solve(&matrix.p, lambda)
        .map(|direct| direct.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));

    Ok(Stationary {
        distribution: Distribution { alphabet: matrix.alphabet.clone(), p: pi },
        eigenvalue: lambda,
        iterations,
        averaged,
        residual,
        linear_solve_gap,
        warnings,
    })
}

/// Solves `(Pᵀ - λI)π = 0` with the last equation replaced by `Σπ = 1`.
fn linear_solve(p: &[Vec<f64>], lambda: f64) -> Option<Vec<f64>> {
    let n = p.len();
    let mut a = DMatrix::from_fn(n, n, |i, j| p[j][i] - if i == j { lambda } else { 0.0 });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    a.lu().solve(&b).map(|x| x.iter().copied().collect())
}
