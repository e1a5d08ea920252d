use std::io::Write;

use crate::error::{Error, Result};
use crate::trajectory::TrajectorySet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    pub alphabet: Vec<String>,
    /// `counts[from][to]`
    pub counts: Vec<Vec<u64>>,
    pub include_self: bool,
}

impl TransitionCounts {
    pub fn new(alphabet: Vec<String>, counts: Vec<Vec<u64>>, include_self: bool) -> Result<Self> {
        let n = alphabet.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(Error::config(format!("transition counts must be {n}x{n}")));
        }
        if !include_self && (0..n).any(|i| counts[i][i] != 0) {
            return Err(Error::config("counts without self-transitions must have a zero diagonal"));
        }
        Ok(Self { alphabet, counts, include_self })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn off_diagonal_total(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).sum::<u64>())
            .sum()
    }

    /// Sum of two count tables over the same alphabet.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet || self.include_self != other.include_self {
            return Err(Error::config("cannot merge counts over different alphabets"));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self { counts, ..self.clone() })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        super::write_square(out, &self.alphabet, &self.counts)
    }
}

/// Counts consecutive label pairs over all trajectories.
pub fn count_transitions(trajectories: &TrajectorySet, include_self: bool) -> Result<TransitionCounts> {
    if trajectories.span() < 2 {
        return Err(Error::config("transitions need trajectories of length at least 2"));
    }
    let n = trajectories.alphabet().len();
    let mut counts = vec![vec![0u64; n]; n];
    for seq in trajectories.sequences() {
        for w in seq.windows(2) {
            if include_self || w[0] != w[1] {
                counts[w[0]][w[1]] += 1;
            }
        }
    }
    TransitionCounts::new(trajectories.alphabet().to_vec(), counts, include_self)
}

/// Off-diagonal counts as fractions of all changes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeFrequencies {
    pub alphabet: Vec<String>,
    pub total_changes: u64,
    /// `fractions[from][to]`, zero on the diagonal.
    pub fractions: Vec<Vec<f64>>,
}

impl ChangeFrequencies {
    /// `(from, to, count, fraction)` for every ordered pair of distinct labels.
    pub fn pairs<'a>(&'a self, counts: &'a TransitionCounts) -> impl Iterator<Item = (&'a str, &'a str, u64, f64)> + 'a {
        let n = self.alphabet.len();
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (self.alphabet[i].as_str(), self.alphabet[j].as_str(), counts.counts[i][j], self.fractions[i][j]))
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        super::write_square(out, &self.alphabet, &self.fractions)
    }
}

pub fn change_frequencies(counts: &TransitionCounts) -> Result<ChangeFrequencies> {
    let total = counts.off_diagonal_total();
    if total == 0 {
        return Err(Error::UndefinedFrequencies);
    }
    let fractions = counts
        .counts
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &c)| if i == j { 0.0 } else { c as f64 / total as f64 })
                .collect()
        })
        .collect();
    Ok(ChangeFrequencies { alphabet: counts.alphabet.clone(), total_changes: total, fractions })
}
