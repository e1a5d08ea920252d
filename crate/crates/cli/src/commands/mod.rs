pub mod group;
pub mod markov;
pub mod pca;
pub mod report;
pub mod synth;
pub mod train;
pub mod trajectories;

use std::path::Path;

use anyhow::{bail, Context, Result};
use segmap::grouping::{MainClassMap, SuperClassMap};
use segmap::panel::{load_panel, LoadOptions, PanelDataset};
use segmap::som::{CodeBook, CodeBookDocument};

use crate::run::Run;

/// Parses `1984-1992` or `1984,1986,1988` (ranges may be mixed into lists).
pub fn parse_int_list(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bounds = part.char_indices().skip(1).find(|&(_, c)| c == '-').map(|(i, _)| i);
        match bounds {
            Some(i) => {
                let lo: i64 = part[..i].trim().parse().with_context(|| format!("bad range `{part}`"))?;
                let hi: i64 = part[i + 1..].trim().parse().with_context(|| format!("bad range `{part}`"))?;
                if hi < lo {
                    bail!("range `{part}` is empty");
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().with_context(|| format!("`{part}` is not an integer"))?),
        }
    }
    if out.is_empty() {
        bail!("empty list `{text}`");
    }
    Ok(out)
}

pub fn parse_years(text: Option<&str>, dataset: &PanelDataset) -> Result<Vec<i32>> {
    match text {
        None => Ok(dataset.years().to_vec()),
        Some(t) => parse_int_list(t)?
            .into_iter()
            .map(|y| i32::try_from(y).context("year out of range"))
            .collect(),
    }
}

/// 1-based axis pair such as `1,2`, returned 0-based.
pub fn parse_axes(text: &str) -> Result<(usize, usize)> {
    let v = parse_int_list(text)?;
    match v.as_slice() {
        [a, b] if *a >= 1 && *b >= 1 => Ok((*a as usize - 1, *b as usize - 1)),
        _ => bail!("axes must be two 1-based component numbers, got `{text}`"),
    }
}

pub fn load(run: &mut Run, path: &Path, categorical: &[String]) -> Result<PanelDataset> {
    let bytes = run.read(path)?;
    load_panel(bytes.as_slice(), &LoadOptions { categorical: categorical.to_vec() })
        .with_context(|| format!("loading panel `{}`", path.display()))
}

/// The requested variables, or every numeric column of the panel.
pub fn select_variables(dataset: &PanelDataset, vars: &[String]) -> Result<Vec<String>> {
    if vars.is_empty() {
        return Ok(dataset.variables().to_vec());
    }
    for v in vars {
        dataset.variable_index(v)?;
    }
    Ok(vars.to_vec())
}

pub fn load_codebook(run: &mut Run, path: &Path) -> Result<(CodeBookDocument, CodeBook)> {
    let doc: CodeBookDocument = run.read_json(path)?;
    let cb = doc.codebook().with_context(|| format!("codebook `{}`", path.display()))?;
    Ok((doc, cb))
}

/// Main-class map from a file, or the default: the seven-to-four
/// grouping when k = 7, identity otherwise.
pub fn main_map(run: &mut Run, path: Option<&Path>, groups: &SuperClassMap) -> Result<MainClassMap> {
    let map = match path {
        Some(p) => run.read_json(p)?,
        None if groups.k == 7 => MainClassMap::default_seven(),
        None => MainClassMap::identity(groups.k),
    };
    map.lookup(groups.k)?;
    Ok(map)
}
