use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

/// Individuals × years × variables with an explicit missing mask.
///
/// Categorical attributes are stored per (individual, year) cell and are
/// only used for profiling classes, never for distances.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    individual_ids: Vec<String>,
    years: Vec<i32>,
    variables: Vec<String>,
    values: Vec<f64>,
    missing: Vec<bool>,
    categoricals: BTreeMap<String, Vec<Option<String>>>,
}

impl PanelDataset {
    /// Creates a dataset whose cells are all missing.
    pub fn new(individual_ids: Vec<String>, years: Vec<i32>, variables: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(dup) = individual_ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::config(format!("duplicate individual id `{dup}`")));
        }
        check_years(&years)?;
        let mut seen = HashSet::new();
        if let Some(dup) = variables.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::Catalog(format!("duplicate variable `{dup}`")));
        }
        let len = individual_ids.len() * years.len() * variables.len();
        Ok(Self {
            individual_ids,
            years,
            variables,
            values: vec![0.0; len],
            missing: vec![true; len],
            categoricals: BTreeMap::new(),
        })
    }

    /// (individuals, years, variables)
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.individual_ids.len(), self.years.len(), self.variables.len())
    }

    pub fn individual_ids(&self) -> &[String] {
        &self.individual_ids
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn year_index(&self, year: i32) -> Option<usize> {
        self.years.iter().position(|&y| y == year)
    }

    pub fn variable_index(&self, code: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == code)
            .ok_or_else(|| Error::Catalog(format!("unknown variable `{code}`")))
    }

    fn offset(&self, individual: usize, year: usize, variable: usize) -> usize {
        let (_, t, v) = self.shape();
        (individual * t + year) * v + variable
    }

    /// Value at (individual, year index, variable index), `None` when masked.
    pub fn get(&self, individual: usize, year: usize, variable: usize) -> Option<f64> {
        let o = self.offset(individual, year, variable);
        (!self.missing[o]).then(|| self.values[o])
    }

    pub fn is_missing(&self, individual: usize, year: usize, variable: usize) -> bool {
        self.missing[self.offset(individual, year, variable)]
    }

    /// Sets a cell; `None` or a non-finite value masks it.
    pub fn set(&mut self, individual: usize, year: usize, variable: usize, value: Option<f64>) {
        let o = self.offset(individual, year, variable);
        match value.filter(|x| x.is_finite()) {
            Some(x) => {
                self.values[o] = x;
                self.missing[o] = false;
            }
            None => {
                self.values[o] = 0.0;
                self.missing[o] = true;
            }
        }
    }

    /// Appends a new variable computed cell-wise from the existing ones.
    pub(crate) fn with_variable<F>(&self, code: &str, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Option<f64>,
    {
        if self.variables.iter().any(|v| v == code) {
            return Err(Error::Catalog(format!("variable `{code}` already present")));
        }
        let (n, t, v) = self.shape();
        let mut out = Self::new(
            self.individual_ids.clone(),
            self.years.clone(),
            self.variables.iter().cloned().chain([code.to_string()]).collect(),
        )?;
        out.categoricals = self.categoricals.clone();
        for i in 0..n {
            for y in 0..t {
                for j in 0..v {
                    out.set(i, y, j, self.get(i, y, j));
                }
                out.set(i, y, v, f(i, y));
            }
        }
        Ok(out)
    }

    /// Keeps only the listed years, which must be consecutive and present.
    ///
    /// Used to drop the pre-period years that only serve as baselines for
    /// derived variables.
    pub fn restrict_years(&self, years: &[i32]) -> Result<Self> {
        let idx = years
            .iter()
            .map(|&y| {
                self.year_index(y)
                    .ok_or_else(|| Error::config(format!("year {y} not in dataset")))
            })
            .collect::<Result<Vec<_>>>()?;
        let (n, _, v) = self.shape();
        let mut out = Self::new(self.individual_ids.clone(), years.to_vec(), self.variables.clone())?;
        for i in 0..n {
            for (new_t, &old_t) in idx.iter().enumerate() {
                for j in 0..v {
                    out.set(i, new_t, j, self.get(i, old_t, j));
                }
            }
        }
        for (name, cells) in &self.categoricals {
            let t_old = self.years.len();
            let col = (0..n)
                .flat_map(|i| idx.iter().map(move |&t| i * t_old + t))
                .map(|o| cells[o].clone())
                .collect();
            out.categoricals.insert(name.clone(), col);
        }
        Ok(out)
    }

    pub fn categorical_names(&self) -> impl Iterator<Item = &str> {
        self.categoricals.keys().map(String::as_str)
    }

    /// Category label of `attribute` at (individual, year index).
    pub fn categorical(&self, attribute: &str, individual: usize, year: usize) -> Result<Option<&str>> {
        let cells = self
            .categoricals
            .get(attribute)
            .ok_or_else(|| Error::config(format!("unknown categorical attribute `{attribute}`")))?;
        Ok(cells[individual * self.years.len() + year].as_deref())
    }

    pub fn set_categorical(&mut self, attribute: &str, individual: usize, year: usize, label: Option<String>) {
        let len = self.individual_ids.len() * self.years.len();
        let t = self.years.len();
        let cells = self
            .categoricals
            .entry(attribute.to_string())
            .or_insert_with(|| vec![None; len]);
        cells[individual * t + year] = label;
    }
}

pub(crate) fn check_years(years: &[i32]) -> Result<()> {
    if let Some(w) = years.windows(2).find(|w| w[1] != w[0] + 1) {
        return Err(Error::config(format!(
            "years must be strictly increasing and consecutive, found {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}
