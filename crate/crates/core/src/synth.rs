//! Synthetic panels with known ground truth.
//!
//! Each individual follows a latent Markov chain over classes; every
//! (individual, year, variable) value is drawn independently from a normal
//! distribution whose mean and spread depend on the latent class of that
//! year.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::draw;
use crate::panel::PanelDataset;
use crate::trajectory::TrajectorySet;

/// Per-variable location and scale of one latent class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Emission {
    pub mean: Vec<f64>,
    pub spread: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub n_individuals: usize,
    pub years: Vec<i32>,
    pub codes: Vec<String>,
    /// Defaults to A, B, C, ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latent_labels: Option<Vec<String>>,
    #[serde(alias = "latent_P")]
    pub latent_p: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    pub emissions: Vec<Emission>,
    #[serde(default)]
    pub missing_rate: f64,
    #[serde(default)]
    pub seed: u64,
}

fn letter_labels(k: usize) -> Vec<String> {
    (0..k)
        .map(|c| if c < 26 { char::from(b'A' + c as u8).to_string() } else { format!("L{}", c + 1) })
        .collect()
}

impl SynthConfig {
    /// Classes whose means differ by `separation` spreads on every
    /// variable: class `c` has mean `separation * ((c + j) mod k)` on
    /// variable `j`, with unit spread.
    #[allow(clippy::too_many_arguments)]
    pub fn separated(
        codes: Vec<String>,
        latent_p: Vec<Vec<f64>>,
        initial: Vec<f64>,
        separation: f64,
        n_individuals: usize,
        years: Vec<i32>,
        missing_rate: f64,
        seed: u64,
    ) -> Self {
        let k = latent_p.len();
        let d = codes.len();
        let emissions = (0..k)
            .map(|c| Emission {
                mean: (0..d).map(|j| separation * ((c + j) % k) as f64).collect(),
                spread: vec![1.0; d],
            })
            .collect();
        Self { n_individuals, years, codes, latent_labels: None, latent_p, initial, emissions, missing_rate, seed }
    }

    pub fn class_count(&self) -> usize {
        self.latent_p.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.latent_labels.clone().unwrap_or_else(|| letter_labels(self.class_count()))
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.class_count();
        let d = self.codes.len();
        if self.n_individuals == 0 || self.years.is_empty() || d == 0 || k == 0 {
            return Err(Error::config("synthetic panel needs individuals, years, variables and classes"));
        }
        crate::panel::PanelDataset::new(vec!["probe".into()], self.years.clone(), self.codes.clone())?;
        if self.labels().len() != k {
            return Err(Error::config("latent_labels length differs from the number of classes"));
        }
        for (c, row) in self.latent_p.iter().enumerate() {
            if row.len() != k {
                return Err(Error::config(format!("latent_P row {} has {} entries, expected {k}", c + 1, row.len())));
            }
            if row.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
                return Err(Error::config(format!("latent_P row {} has a negative or non-finite entry", c + 1)));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::config(format!("latent_P row {} sums to {sum}", c + 1)));
            }
        }
        if self.initial.len() != k
            || self.initial.iter().any(|&p| !(p >= 0.0 && p.is_finite()))
            || (self.initial.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return Err(Error::config("initial must be a probability vector over the latent classes"));
        }
        if self.emissions.len() != k {
            return Err(Error::config(format!("expected {k} emissions, found {}", self.emissions.len())));
        }
        for (c, e) in self.emissions.iter().enumerate() {
            if e.mean.len() != d || e.spread.len() != d {
                return Err(Error::config(format!("emission {} must have {d} means and spreads", c + 1)));
            }
            if e.mean.iter().any(|m| !m.is_finite()) || e.spread.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                return Err(Error::config(format!("emission {} needs finite means and positive spreads", c + 1)));
            }
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::config("missing_rate must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Draws a panel and the latent class trajectories that generated it.
pub fn generate_panel(config: &SynthConfig) -> Result<(PanelDataset, TrajectorySet)> {
    config.validate()?;
    let (n, t_len, d) = (config.n_individuals, config.years.len(), config.codes.len());
    let ids: Vec<String> = (1..=n).map(|i| format!("ind{i}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut latent = Vec::with_capacity(n * t_len);
    for _ in 0..n {
        let mut s = draw(&mut rng, &config.initial);
        latent.push(s);
        for _ in 1..t_len {
            s = draw(&mut rng, &config.latent_p[s]);
            latent.push(s);
        }
    }

    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut ds = PanelDataset::new(ids.clone(), config.years.clone(), config.codes.clone())?;
    for i in 0..n {
        for t in 0..t_len {
            let e = &config.emissions[latent[i * t_len + t]];
            for j in 0..d {
                let x = e.mean[j] + e.spread[j] * noise.sample(&mut rng);
                let masked = config.missing_rate > 0.0 && rng.random::<f64>() < config.missing_rate;
                ds.set(i, t, j, (!masked).then_some(x));
            }
        }
    }
    let truth = TrajectorySet::new(ids, config.years.clone(), config.labels(), latent)?;
    Ok((ds, truth))
}

/// Assigns each estimated class centroid to the latent class with the
/// nearest emission mean (Euclidean, raw units).
pub fn match_by_emission_mean(config: &SynthConfig, centroids: &[Vec<f64>]) -> Result<Vec<usize>> {
    let d = config.codes.len();
    centroids
        .iter()
        .map(|c| {
            if c.len() != d {
                return Err(Error::config(format!("centroid has {} coordinates, expected {d}", c.len())));
            }
            let dist = |e: &Emission| e.mean.iter().zip(c).map(|(m, x)| (m - x) * (m - x)).sum::<f64>();
            Ok((0..config.class_count())
                .min_by(|&a, &b| dist(&config.emissions[a]).total_cmp(&dist(&config.emissions[b])))
                .expect("at least one class"))
        })
        .collect()
}
