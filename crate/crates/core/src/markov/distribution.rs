use std::io::Write;

use crate::error::{Error, Result};
use crate::trajectory::TrajectorySet;

/// Probability vector over a label alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub alphabet: Vec<String>,
    pub p: Vec<f64>,
}

impl Distribution {
    pub fn new(alphabet: Vec<String>, p: Vec<f64>) -> Result<Self> {
        if alphabet.len() != p.len() {
            return Err(Error::config("distribution length does not match its alphabet"));
        }
        if p.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain("distribution entries must be non-negative".into()));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("distribution sums to {sum}, not 1")));
        }
        Ok(Self { alphabet, p })
    }

    pub fn uniform(alphabet: Vec<String>) -> Self {
        let n = alphabet.len();
        Self { p: vec![1.0 / n as f64; n], alphabet }
    }
}

/// Label shares among individuals in `year`.
pub fn distribution_at_year(trajectories: &TrajectorySet, year: i32) -> Result<Distribution> {
    let t = trajectories
        .years()
        .iter()
        .position(|&y| y == year)
        .ok_or_else(|| Error::config(format!("year {year} not in trajectories")))?;
    if trajectories.is_empty() {
        return Err(Error::config("distribution of an empty cohort"));
    }
    let mut counts = vec![0usize; trajectories.alphabet().len()];
    for seq in trajectories.sequences() {
        counts[seq[t]] += 1;
    }
    let n = trajectories.len() as f64;
    Distribution::new(trajectories.alphabet().to_vec(), counts.iter().map(|&c| c as f64 / n).collect())
}

/// One named row per distribution, label columns, e.g. observed years
/// followed by the stationary distribution.
pub fn write_distribution_table<W: Write>(out: W, rows: &[(String, &Distribution)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some((_, first)) = rows.first() {
        let mut header = vec![String::new()];
        header.extend(first.alphabet.iter().cloned());
        w.write_record(&header)?;
    }
    for (name, d) in rows {
        let mut rec = vec![name.clone()];
        rec.extend(d.p.iter().map(|x| format!("{x}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shares_at_year() {
        let t = TrajectorySet::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![1984, 1985],
            vec!["A".into(), "B".into()],
            vec![0, 0, 0, 1, 0, 1, 1, 1],
        )
        .unwrap();
        let d = distribution_at_year(&t, 1984).unwrap();
        assert_eq!(d.p, [0.75, 0.25]);
        let d = distribution_at_year(&t, 1985).unwrap();
        assert_eq!(d.p, [0.25, 0.75]);
        assert!((d.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(distribution_at_year(&t, 1990).is_err());
    }

    #[test]
    fn all_in_first_class() {
        let t = TrajectorySet::new(vec!["a".into(), "b".into()], vec![1], (0..4).map(|c| c.to_string()).collect(), vec![0, 0]).unwrap();
        assert_eq!(distribution_at_year(&t, 1).unwrap().p, [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn validation() {
        assert!(Distribution::new(vec!["a".into(), "b".into()], vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec!["a".into(), "b".into()], vec![1.5, -0.5]).is_err());
        assert!(Distribution::new(vec!["a".into()], vec![1.0, 0.0]).is_err());
    }
}
