//! Projection of every (individual, year) record onto a trained map,
//! label sequences across years, and dominant-position statistics.

use std::collections::HashSet;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::grouping::{MainClassMap, SuperClassMap};
use crate::panel::{Observation, PanelDataset, StandardizationParams};
use crate::som::{bmu, CodeBook};

/// Per-individual label sequences of equal length over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    individual_ids: Vec<String>,
    years: Vec<i32>,
    alphabet: Vec<String>,
    labels: Vec<usize>,
}

impl TrajectorySet {
    /// `labels` is individual-major, `years.len()` labels per individual,
    /// each an index into `alphabet`.
    pub fn new(individual_ids: Vec<String>, years: Vec<i32>, alphabet: Vec<String>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != individual_ids.len() * years.len() {
            return Err(Error::config(format!(
                "{} labels for {} individuals over {} years",
                labels.len(),
                individual_ids.len(),
                years.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= alphabet.len()) {
            return Err(Error::config(format!("label index {l} outside alphabet of {}", alphabet.len())));
        }
        Ok(Self { individual_ids, years, alphabet, labels })
    }

    pub fn individual_ids(&self) -> &[String] {
        &self.individual_ids
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.individual_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individual_ids.is_empty()
    }

    /// Trajectory length T.
    pub fn span(&self) -> usize {
        self.years.len()
    }

    pub fn sequence(&self, individual: usize) -> &[usize] {
        let t = self.years.len();
        &self.labels[individual * t..(individual + 1) * t]
    }

    pub fn sequences(&self) -> impl Iterator<Item = &[usize]> {
        // chunks(0) panics, and a zero-year set has no labels anyway
        self.labels.chunks(self.years.len().max(1)).take(self.len())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Cell-wise relabeling through `mapping` (old index → new index).
    pub fn relabel(&self, mapping: &[usize], alphabet: Vec<String>) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                mapping
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::config(format!("no mapping for label `{}`", self.alphabet[l])))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.individual_ids.clone(), self.years.clone(), alphabet, labels)
    }

    /// `individual_id,<year...>` with label names in the cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["individual_id".to_string()];
        header.extend(self.years.iter().map(i32::to_string));
        w.write_record(&header)?;
        for (id, seq) in self.individual_ids.iter().zip(self.sequences()) {
            let mut rec = vec![id.clone()];
            rec.extend(seq.iter().map(|&l| self.alphabet[l].clone()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the layout of [`write_csv`](Self::write_csv). Without an
    /// explicit alphabet the observed labels are used, sorted numerically
    /// when they are all integers.
    pub fn read_csv<R: Read>(source: R, alphabet: Option<Vec<String>>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let header = reader.headers()?.clone();
        if header.get(0) != Some("individual_id") {
            return Err(Error::Parse { line: 1, message: "first column must be `individual_id`".into() });
        }
        let years = header
            .iter()
            .skip(1)
            .map(|y| y.parse::<i32>().map_err(|_| Error::Parse { line: 1, message: format!("`{y}` is not a year") }))
            .collect::<Result<Vec<_>>>()?;
        let mut ids = Vec::new();
        let mut cells: Vec<(u64, String)> = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            ids.push(record[0].to_string());
            cells.extend(record.iter().skip(1).map(|c| (line, c.to_string())));
        }
        let alphabet = alphabet.unwrap_or_else(|| {
            let mut seen: Vec<String> = cells.iter().map(|(_, c)| c.clone()).collect::<HashSet<_>>().into_iter().collect();
            if seen.iter().all(|s| s.parse::<i64>().is_ok()) {
                seen.sort_by_key(|s| s.parse::<i64>().expect("checked integer"));
            } else {
                seen.sort();
            }
            seen
        });
        let labels = cells
            .iter()
            .map(|(line, c)| {
                alphabet
                    .iter()
                    .position(|a| a == c)
                    .ok_or_else(|| Error::Parse { line: *line, message: format!("unknown label `{c}`") })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids, years, alphabet, labels)
    }
}

/// Label granularity of a trajectory set.
#[derive(Debug, Clone, Copy)]
pub enum Granularity<'a> {
    /// Map units, named "1".."n".
    Unit,
    Super(&'a SuperClassMap),
    Main(&'a SuperClassMap, &'a MainClassMap),
}

/// Standardizes a raw record with the training-time parameters, then finds
/// its best-matching unit on the observed coordinates. The record is laid
/// out in the order of `params.codes`.
pub fn project_year(params: &StandardizationParams, codebook: &CodeBook, values: &[f64], missing: &[bool]) -> Result<usize> {
    if values.len() != params.codes.len() || missing.len() != values.len() {
        return Err(Error::config("record does not match the standardization variables"));
    }
    let z = params.standardize_row(values, missing);
    bmu(codebook, Observation::new(&z, missing)).map(|(u, _)| u)
}

pub fn build_trajectories(
    dataset: &PanelDataset,
    years: &[i32],
    params: &StandardizationParams,
    codebook: &CodeBook,
    granularity: Granularity<'_>,
) -> Result<TrajectorySet> {
    let year_idx = years
        .iter()
        .map(|&y| dataset.year_index(y).ok_or_else(|| Error::config(format!("year {y} not in dataset"))))
        .collect::<Result<Vec<_>>>()?;
    let var_idx = params
        .codes
        .iter()
        .map(|c| dataset.variable_index(c))
        .collect::<Result<Vec<_>>>()?;
    let n = dataset.individual_ids().len();
    let mut units = Vec::with_capacity(n * years.len());
    let mut values = vec![0.0; var_idx.len()];
    let mut missing = vec![false; var_idx.len()];
    for i in 0..n {
        for (&t, &year) in year_idx.iter().zip(years) {
            for (k, &j) in var_idx.iter().enumerate() {
                let cell = dataset.get(i, t, j);
                values[k] = cell.unwrap_or(0.0);
                missing[k] = cell.is_none();
            }
            let u = project_year(params, codebook, &values, &missing).map_err(|e| match e {
                Error::EmptyObservation { .. } => Error::EmptyObservation {
                    context: Some(format!("individual `{}`, year {year}", dataset.individual_ids()[i])),
                },
                other => other,
            })?;
            units.push(u);
        }
    }
    let unit_names: Vec<String> = (1..=codebook.unit_count()).map(|u| u.to_string()).collect();
    let by_unit = TrajectorySet::new(dataset.individual_ids().to_vec(), years.to_vec(), unit_names, units)?;
    match granularity {
        Granularity::Unit => Ok(by_unit),
        Granularity::Super(map) => to_super(&by_unit, map),
        Granularity::Main(map, main) => {
            let sup = to_super(&by_unit, map)?;
            sup.relabel(&main.lookup(map.k)?, main.labels())
        }
    }
}

fn to_super(by_unit: &TrajectorySet, map: &SuperClassMap) -> Result<TrajectorySet> {
    if map.unit_to_super.len() != by_unit.alphabet().len() {
        return Err(Error::config(format!(
            "super-class map covers {} units, codebook has {}",
            map.unit_to_super.len(),
            by_unit.alphabet().len()
        )));
    }
    by_unit.relabel(&map.unit_to_super, map.labels())
}

/// The label occupied at least `threshold` times, if any. Should several
/// qualify (only possible when `threshold <= T/2`), the most frequent wins,
/// then the lowest label.
pub fn dominant_position(sequence: &[usize], threshold: usize) -> Option<usize> {
    let threshold = threshold.max(1);
    let mut counts: Vec<usize> = Vec::new();
    for &l in sequence {
        if l >= counts.len() {
            counts.resize(l + 1, 0);
        }
        counts[l] += 1;
    }
    let (label, &count) = counts.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    (count >= threshold).then_some(label)
}

/// Smallest threshold that makes a dominant position unique for length T.
pub fn default_threshold(span: usize) -> usize {
    span / 2 + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGroup {
    /// `None` for individuals without a dominant position.
    pub dominant: Option<usize>,
    pub size: usize,
    /// Share of the group's years spent in each label; `None` for an empty
    /// group.
    pub probabilities: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominantPositionReport {
    pub alphabet: Vec<String>,
    pub threshold: usize,
    /// One group per label, in alphabet order.
    pub groups: Vec<OccupancyGroup>,
    pub no_dominant: OccupancyGroup,
}

impl DominantPositionReport {
    pub fn cohort_size(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum::<usize>() + self.no_dominant.size
    }

    /// `dominant,size,<label...>`; the last row, `none`, is the group without
    /// a dominant position.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["dominant".to_string(), "size".to_string()];
        header.extend(self.alphabet.iter().cloned());
        w.write_record(&header)?;
        let rows = self
            .groups
            .iter()
            .map(|g| (self.alphabet[g.dominant.expect("labelled group")].clone(), g))
            .chain([("none".to_string(), &self.no_dominant)]);
        for (name, g) in rows {
            let mut rec = vec![name, g.size.to_string()];
            match &g.probabilities {
                Some(p) => rec.extend(p.iter().map(|x| format!("{x}"))),
                None => rec.extend(self.alphabet.iter().map(|_| String::new())),
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Groups individuals by dominant label and reports, per group, the share
/// of all group-years spent in each label.
pub fn occupancy_report(trajectories: &TrajectorySet, threshold: usize) -> Result<DominantPositionReport> {
    if trajectories.is_empty() || trajectories.span() == 0 {
        return Err(Error::config("occupancy report of an empty trajectory set"));
    }
    let a = trajectories.alphabet().len();
    let mut sizes = vec![0usize; a + 1];
    let mut cells = vec![vec![0usize; a]; a + 1];
    for seq in trajectories.sequences() {
        let g = dominant_position(seq, threshold).unwrap_or(a);
        sizes[g] += 1;
        for &l in seq {
            cells[g][l] += 1;
        }
    }
    let span = trajectories.span() as f64;
    let group = |g: usize| OccupancyGroup {
        dominant: (g < a).then_some(g),
        size: sizes[g],
        probabilities: (sizes[g] > 0).then(|| cells[g].iter().map(|&c| c as f64 / (sizes[g] as f64 * span)).collect()),
    };
    Ok(DominantPositionReport {
        alphabet: trajectories.alphabet().to_vec(),
        threshold: threshold.max(1),
        groups: (0..a).map(group).collect(),
        no_dominant: group(a),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StabilityCensus {
    pub min_years: usize,
    /// Individuals whose most frequent label occurs at least `min_years` times.
    pub stayers: usize,
    /// The same count split by that label.
    pub stayers_by_label: Vec<usize>,
    pub distinct_trajectories: usize,
}

pub fn stability_census(trajectories: &TrajectorySet, min_years: usize) -> Result<StabilityCensus> {
    if min_years == 0 || min_years > trajectories.span() {
        return Err(Error::config(format!(
            "min_years must lie in 1..={}, got {min_years}",
            trajectories.span()
        )));
    }
    let mut by_label = vec![0usize; trajectories.alphabet().len()];
    for seq in trajectories.sequences() {
        if let Some(l) = dominant_position(seq, min_years) {
            by_label[l] += 1;
        }
    }
    let distinct = trajectories.sequences().collect::<HashSet<_>>().len();
    Ok(StabilityCensus {
        min_years,
        stayers: by_label.iter().sum(),
        stayers_by_label: by_label,
        distinct_trajectories: distinct,
    })
}
