use serde::{Deserialize, Serialize};

use super::matrix::ObservationMatrix;
use crate::error::{Error, Result};

/// Per-variable centering and scaling, keyed by variable code.
///
/// The scale is the population standard deviation over observed cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub codes: Vec<String>,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl StandardizationParams {
    fn index(&self, code: &str) -> Result<usize> {
        self.codes
            .iter()
            .position(|c| c == code)
            .ok_or_else(|| Error::config(format!("no standardization parameters for `{code}`")))
    }

    /// Column permutation mapping `codes` onto these parameters.
    fn indices_for<S: AsRef<str>>(&self, codes: &[S]) -> Result<Vec<usize>> {
        codes.iter().map(|c| self.index(c.as_ref())).collect()
    }

    /// Standardizes one record laid out in the same order as `self.codes`.
    /// Masked cells are left at 0.0.
    pub fn standardize_row(&self, values: &[f64], missing: &[bool]) -> Vec<f64> {
        values
            .iter()
            .zip(missing)
            .enumerate()
            .map(|(j, (&x, &m))| if m { 0.0 } else { (x - self.mean[j]) / self.scale[j] })
            .collect()
    }

    pub fn destandardize_row(&self, z: &[f64]) -> Vec<f64> {
        z.iter()
            .enumerate()
            .map(|(j, &v)| v * self.scale[j] + self.mean[j])
            .collect()
    }

    /// Inverse transform `x = z * scale + mean` on observed cells.
    pub fn invert(&self, matrix: &ObservationMatrix) -> Result<ObservationMatrix> {
        let idx = self.indices_for(matrix.codes())?;
        Ok(matrix.map_observed(|j, z| z * self.scale[idx[j]] + self.mean[idx[j]]))
    }
}

pub fn fit_standardization(matrix: &ObservationMatrix) -> Result<StandardizationParams> {
    let mut mean = Vec::with_capacity(matrix.n_cols());
    let mut scale = Vec::with_capacity(matrix.n_cols());
    for (j, code) in matrix.codes().iter().enumerate() {
        let (n, sum) = matrix.column(j).fold((0usize, 0.0), |(n, s), x| (n + 1, s + x));
        if n < 2 {
            return Err(Error::DegenerateVariable(code.clone()));
        }
        let m = sum / n as f64;
        let var = matrix.column(j).map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
        let sd = var.sqrt();
        // a spread below rounding noise of the mean counts as constant
        if sd.is_nan() || sd <= 1e-12 * m.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateVariable(code.clone()));
        }
        mean.push(m);
        scale.push(sd);
    }
    Ok(StandardizationParams { codes: matrix.codes().to_vec(), mean, scale })
}

/// `z = (x - mean) / scale` on observed cells; masked cells stay masked.
pub fn apply_standardization(params: &StandardizationParams, matrix: &ObservationMatrix) -> Result<ObservationMatrix> {
    let idx = params.indices_for(matrix.codes())?;
    Ok(matrix.map_observed(|j, x| (x - params.mean[idx[j]]) / params.scale[idx[j]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn col(values: &[Option<f64>]) -> ObservationMatrix {
        let rows: Vec<Vec<Option<f64>>> = values.iter().map(|&v| vec![v]).collect();
        ObservationMatrix::from_rows(vec!["X".into()], &rows).unwrap()
    }

    #[test]
    fn population_scale() {
        let p = fit_standardization(&col(&[Some(1.0), Some(2.0), Some(3.0)])).unwrap();
        assert_eq!(p.mean[0], 2.0);
        // independent: sqrt(((1-2)^2 + 0 + (3-2)^2) / 3)
        assert!((p.scale[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((p.scale[0] - 0.8165).abs() < 1e-4);
    }

    #[test]
    fn constant_column_is_degenerate() {
        let err = fit_standardization(&col(&[Some(5.0), Some(5.0), Some(5.0)])).unwrap_err();
        assert!(matches!(err, Error::DegenerateVariable(c) if c == "X"));
        assert!(fit_standardization(&col(&[Some(5.0), None])).is_err());
    }

    #[test]
    fn missing_cells_skipped() {
        let p = fit_standardization(&col(&[Some(1.0), None, Some(3.0)])).unwrap();
        assert_eq!((p.mean[0], p.scale[0]), (2.0, 1.0));
    }

    #[test]
    fn apply_known_values() {
        let m = col(&[Some(1.0), Some(2.0), Some(3.0)]);
        let p = StandardizationParams { codes: vec!["X".into()], mean: vec![2.0], scale: vec![0.8165] };
        let z = apply_standardization(&p, &m).unwrap();
        let got: Vec<f64> = z.column(0).collect();
        for (g, e) in got.iter().zip([-1.2247, 0.0, 1.2247]) {
            assert!((g - e).abs() < 1e-4);
        }
    }

    #[test]
    fn apply_at_mean_is_zero_and_mask_preserved() {
        let m = col(&[Some(4.0), None, Some(4.0)]);
        let p = StandardizationParams { codes: vec!["X".into()], mean: vec![4.0], scale: vec![3.0] };
        let z = apply_standardization(&p, &m).unwrap();
        assert_eq!(z.get(0, 0), Some(0.0));
        assert_eq!(z.get(1, 0), None);
        assert_eq!(z.get(2, 0), Some(0.0));
    }

    #[test]
    fn apply_requires_params_for_every_column() {
        let m = col(&[Some(1.0)]);
        let p = StandardizationParams { codes: vec!["Y".into()], mean: vec![0.0], scale: vec![1.0] };
        assert!(matches!(apply_standardization(&p, &m), Err(Error::Config(_))));
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (2usize..20, 1usize..5).prop_flat_map(|(n, d)| {
            prop::collection::vec(prop::collection::vec(-1e3f64..1e3, d), n)
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_refit(rows in matrix_strategy()) {
            let d = rows[0].len();
            let codes: Vec<String> = (0..d).map(|j| format!("V{j}")).collect();
            let m = ObservationMatrix::from_dense(codes, &rows).unwrap();
            let Ok(p) = fit_standardization(&m) else { return Ok(()) };
            let z = apply_standardization(&p, &m).unwrap();
            let back = p.invert(&z).unwrap();
            for i in 0..m.n_rows() {
                for j in 0..d {
                    let (x, y) = (m.get(i, j).unwrap(), back.get(i, j).unwrap());
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(p.mean[j].abs()).max(p.scale[j]));
                }
            }
            // only meaningful when the column is not nearly constant
            if p.scale.iter().zip(&p.mean).all(|(s, m)| *s > 1e-6 * m.abs().max(1.0)) {
                let q = fit_standardization(&z).unwrap();
                for j in 0..d {
                    prop_assert!(q.mean[j].abs() <= 1e-12);
                    prop_assert!((q.scale[j] - 1.0).abs() <= 1e-12);
                }
            }
        }
    }
}
