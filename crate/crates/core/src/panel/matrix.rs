use super::dataset::PanelDataset;
use crate::error::{Error, Result};

/// One row of an observation matrix with its missing mask.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub values: &'a [f64],
    pub missing: &'a [bool],
}

impl<'a> Observation<'a> {
    pub fn new(values: &'a [f64], missing: &'a [bool]) -> Self {
        debug_assert_eq!(values.len(), missing.len());
        Self { values, missing }
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    /// Observed coordinates as (index, value) pairs.
    pub fn observed(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        let (values, missing) = (self.values, self.missing);
        (0..values.len()).filter(move |&j| !missing[j]).map(move |j| (j, values[j]))
    }

    pub fn observed_count(&self) -> usize {
        self.missing.iter().filter(|&&m| !m).count()
    }
}

/// Where a pooled row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowOrigin {
    pub individual: usize,
    pub year: i32,
}

/// Rows × variables with a missing mask; masked cells hold 0.0 and are
/// never read through the public accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    codes: Vec<String>,
    values: Vec<f64>,
    missing: Vec<bool>,
    origins: Option<Vec<RowOrigin>>,
}

impl ObservationMatrix {
    pub fn from_rows(codes: Vec<String>, rows: &[Vec<Option<f64>>]) -> Result<Self> {
        let d = codes.len();
        let mut values = Vec::with_capacity(rows.len() * d);
        let mut missing = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::config(format!("row {i} has {} cells, expected {d}", row.len())));
            }
            for cell in row {
                match cell.filter(|x| x.is_finite()) {
                    Some(x) => {
                        values.push(x);
                        missing.push(false);
                    }
                    None => {
                        values.push(0.0);
                        missing.push(true);
                    }
                }
            }
        }
        Ok(Self { codes, values, missing, origins: None })
    }

    /// Fully observed matrix from plain rows.
    pub fn from_dense(codes: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Option<f64>>> = rows.iter().map(|r| r.iter().map(|&x| Some(x)).collect()).collect();
        Self::from_rows(codes, &rows)
    }

    pub(crate) fn from_parts(codes: Vec<String>, values: Vec<f64>, missing: Vec<bool>, origins: Option<Vec<RowOrigin>>) -> Self {
        debug_assert_eq!(values.len(), missing.len());
        debug_assert!(codes.is_empty() || values.len().is_multiple_of(codes.len()));
        Self { codes, values, missing, origins }
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn n_rows(&self) -> usize {
        if self.codes.is_empty() {
            self.origins.as_ref().map_or(0, Vec::len)
        } else {
            self.values.len() / self.codes.len()
        }
    }

    pub fn n_cols(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows() == 0
    }

    pub fn row(&self, i: usize) -> Observation<'_> {
        let d = self.codes.len();
        Observation::new(&self.values[i * d..(i + 1) * d], &self.missing[i * d..(i + 1) * d])
    }

    pub fn rows(&self) -> impl Iterator<Item = Observation<'_>> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let o = i * self.codes.len() + j;
        (!self.missing[o]).then(|| self.values[o])
    }

    /// Observed values of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_rows()).filter_map(move |i| self.get(i, j))
    }

    /// Row provenance for matrices produced by [`pool_years`].
    pub fn origins(&self) -> Option<&[RowOrigin]> {
        self.origins.as_deref()
    }

    /// Copy without the rows that have no observed cell, and how many were
    /// removed. Provenance follows the kept rows.
    pub fn drop_empty_rows(&self) -> (Self, usize) {
        let d = self.codes.len();
        let keep: Vec<usize> = (0..self.n_rows()).filter(|&i| self.row(i).observed_count() > 0).collect();
        let mut values = Vec::with_capacity(keep.len() * d);
        let mut missing = Vec::with_capacity(keep.len() * d);
        for &i in &keep {
            values.extend_from_slice(&self.values[i * d..(i + 1) * d]);
            missing.extend_from_slice(&self.missing[i * d..(i + 1) * d]);
        }
        let origins = self.origins.as_ref().map(|o| keep.iter().map(|&i| o[i]).collect());
        let removed = self.n_rows() - keep.len();
        (Self { codes: self.codes.clone(), values, missing, origins }, removed)
    }

    pub(crate) fn map_observed<F: FnMut(usize, f64) -> f64>(&self, mut f: F) -> Self {
        let d = self.codes.len().max(1);
        let values = self
            .values
            .iter()
            .zip(&self.missing)
            .enumerate()
            .map(|(o, (&x, &m))| if m { 0.0 } else { f(o % d, x) })
            .collect();
        Self { values, ..self.clone() }
    }
}

/// Stacks the requested years of every individual into one matrix, as if
/// each (individual, year) record were a separate individual.
///
/// Rows are individual-major, then in the order of `years`.
pub fn pool_years<S: AsRef<str>>(dataset: &PanelDataset, years: &[i32], codes: &[S]) -> Result<ObservationMatrix> {
    let year_idx = years
        .iter()
        .map(|&y| {
            dataset
                .year_index(y)
                .ok_or_else(|| Error::config(format!("year {y} not in dataset")))
        })
        .collect::<Result<Vec<_>>>()?;
    let var_idx = codes
        .iter()
        .map(|c| dataset.variable_index(c.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let n = dataset.individual_ids().len();
    let rows = n * years.len();
    let mut values = Vec::with_capacity(rows * codes.len());
    let mut missing = Vec::with_capacity(rows * codes.len());
    let mut origins = Vec::with_capacity(rows);
    for i in 0..n {
        for (&t, &year) in year_idx.iter().zip(years) {
            for &j in &var_idx {
                let cell = dataset.get(i, t, j);
                values.push(cell.unwrap_or(0.0));
                missing.push(cell.is_none());
            }
            origins.push(RowOrigin { individual: i, year });
        }
    }
    Ok(ObservationMatrix::from_parts(
        codes.iter().map(|c| c.as_ref().to_string()).collect(),
        values,
        missing,
        Some(origins),
    ))
}
