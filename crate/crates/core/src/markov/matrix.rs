use std::io::{Read, Write};

use super::counts::TransitionCounts;
use crate::error::{Error, Result};

/// Square non-negative matrix over a label alphabet. Rows are not required
/// to sum to one; [`max_row_sum_deviation`](Self::max_row_sum_deviation)
/// reports how far they are.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub alphabet: Vec<String>,
    /// `p[from][to]`
    pub p: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(alphabet: Vec<String>, p: Vec<Vec<f64>>) -> Result<Self> {
        let n = alphabet.len();
        if n == 0 || p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("transition matrix must be a non-empty {n}x{n} square")));
        }
        if p.iter().flatten().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain("transition matrix entries must be finite and non-negative".into()));
        }
        Ok(Self { alphabet, p })
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.p.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn max_row_sum_deviation(&self) -> f64 {
        self.row_sums().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn is_stochastic(&self, tol: f64) -> bool {
        self.max_row_sum_deviation() <= tol
    }

    /// Same layout as written by [`write_csv`](Self::write_csv): a header of
    /// labels (first cell ignored) and one labelled row per state.
    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let header = reader.headers()?.clone();
        let alphabet: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut p = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != alphabet.len() + 1 {
                return Err(Error::Parse { line, message: format!("expected {} fields", alphabet.len() + 1) });
            }
            if alphabet.get(i).map(String::as_str) != Some(&record[0]) {
                return Err(Error::Parse {
                    line,
                    message: format!("row label `{}` does not match the header order", &record[0]),
                });
            }
            let row = record
                .iter()
                .skip(1)
                .map(|c| c.parse::<f64>().map_err(|_| Error::Parse { line, message: format!("`{c}` is not a number") }))
                .collect::<Result<Vec<_>>>()?;
            p.push(row);
        }
        Self::new(alphabet, p)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        super::write_square(out, &self.alphabet, &self.p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEstimate {
    pub matrix: TransitionMatrix,
    /// States never left nor stayed in; their rows were set to a self-loop.
    pub empty_rows: Vec<usize>,
}

/// Row-normalized transition counts (self-transitions included).
pub fn transition_matrix(counts: &TransitionCounts) -> Result<TransitionEstimate> {
    if !counts.include_self {
        return Err(Error::config("the transition matrix needs counts that include self-transitions"));
    }
    let mut empty_rows = Vec::new();
    let p = counts
        .counts
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                empty_rows.push(i);
                (0..row.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect()
            } else {
                row.iter().map(|&c| c as f64 / total as f64).collect()
            }
        })
        .collect();
    Ok(TransitionEstimate { matrix: TransitionMatrix::new(counts.alphabet.clone(), p)?, empty_rows })
}

/// Whether the directed graph of strictly positive entries is strongly
/// connected.
pub fn is_irreducible(matrix: &TransitionMatrix) -> bool {
    let n = matrix.size();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let w = if forward { matrix.p[i][j] } else { matrix.p[j][i] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach(true) && reach(false)
}
