use std::collections::BTreeMap;

use super::dataset::PanelDataset;
use crate::error::{Error, Result};

/// `out(t) = (var(t) - var(t-1)) / var(t-1)`.
///
/// The first year is masked, as is any year whose previous value is
/// missing or zero.
pub fn derive_growth_rate(dataset: &PanelDataset, var: &str, out: &str) -> Result<PanelDataset> {
    let j = dataset.variable_index(var)?;
    dataset.with_variable(out, |i, t| {
        let prev = dataset.get(i, t.checked_sub(1)?, j).filter(|&p| p != 0.0)?;
        let cur = dataset.get(i, t, j)?;
        Some((cur - prev) / prev)
    })
}

/// `out(t) = var(t) - var(baseline_year)`.
pub fn derive_difference(
    dataset: &PanelDataset,
    var: &str,
    baseline_year: i32,
    out: &str,
) -> Result<PanelDataset> {
    let j = dataset.variable_index(var)?;
    let base = dataset
        .year_index(baseline_year)
        .ok_or_else(|| Error::config(format!("baseline year {baseline_year} not in dataset")))?;
    dataset.with_variable(out, |i, t| Some(dataset.get(i, t, j)? - dataset.get(i, base, j)?))
}

/// `out(t) = var(t) / deflator(t)`.
pub fn deflate(
    dataset: &PanelDataset,
    var: &str,
    deflator: &BTreeMap<i32, f64>,
    out: &str,
) -> Result<PanelDataset> {
    let j = dataset.variable_index(var)?;
    if let Some((year, d)) = deflator.iter().find(|(_, &d)| !(d > 0.0 && d.is_finite())) {
        return Err(Error::Domain(format!("deflator for {year} is not positive: {d}")));
    }
    let factors = dataset
        .years()
        .iter()
        .map(|y| {
            deflator
                .get(y)
                .copied()
                .ok_or_else(|| Error::config(format!("no deflator for year {y}")))
        })
        .collect::<Result<Vec<_>>>()?;
    dataset.with_variable(out, |i, t| Some(dataset.get(i, t, j)? / factors[t]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(values: &[Option<f64>]) -> PanelDataset {
        let years: Vec<i32> = (0..values.len() as i32).map(|t| 1990 + t).collect();
        let mut ds = PanelDataset::new(vec!["a".into()], years, vec!["X".into()]).unwrap();
        for (t, v) in values.iter().enumerate() {
            ds.set(0, t, 0, *v);
        }
        ds
    }

    fn column(ds: &PanelDataset, code: &str) -> Vec<Option<f64>> {
        let j = ds.variable_index(code).unwrap();
        (0..ds.years().len()).map(|t| ds.get(0, t, j)).collect()
    }

    #[test]
    fn growth_rate_simple() {
        let ds = derive_growth_rate(&series(&[Some(10.0), Some(11.0)]), "X", "G").unwrap();
        let g = column(&ds, "G");
        assert_eq!(g[0], None);
        assert!((g[1].unwrap() - 0.10).abs() < 1e-15);
    }

    #[test]
    fn growth_rate_masks_zero_and_missing_denominator() {
        let ds = derive_growth_rate(&series(&[Some(0.0), Some(5.0), None, Some(3.0)]), "X", "G").unwrap();
        assert_eq!(column(&ds, "G"), [None, None, None, None]);
    }

    #[test]
    fn growth_rate_unknown_variable() {
        let err = derive_growth_rate(&series(&[Some(1.0)]), "Y", "G").unwrap_err();
        assert!(matches!(err, Error::Catalog(_)));
    }

    #[test]
    fn difference_from_baseline() {
        let ds = series(&[Some(40.0), Some(38.0), Some(45.0)]);
        let d = derive_difference(&ds, "X", 1990, "D").unwrap();
        assert_eq!(column(&d, "D"), [Some(0.0), Some(-2.0), Some(5.0)]);
    }

    #[test]
    fn difference_missing_baseline_masks_everything() {
        let ds = series(&[None, Some(38.0), Some(45.0)]);
        let d = derive_difference(&ds, "X", 1990, "D").unwrap();
        assert_eq!(column(&d, "D"), [None, None, None]);
    }

    #[test]
    fn difference_errors() {
        let ds = series(&[Some(1.0), Some(2.0)]);
        assert!(matches!(derive_difference(&ds, "X", 1980, "D"), Err(Error::Config(_))));
        assert!(matches!(derive_difference(&ds, "X", 1990, "X"), Err(Error::Catalog(_))));
    }

    #[test]
    fn deflate_cases() {
        let ds = series(&[Some(10.0), Some(7.0)]);
        let defl: BTreeMap<i32, f64> = [(1990, 1.25), (1991, 1.0)].into();
        assert_eq!(column(&deflate(&ds, "X", &defl, "R").unwrap(), "R"), [Some(8.0), Some(7.0)]);

        let ones: BTreeMap<i32, f64> = [(1990, 1.0), (1991, 1.0)].into();
        let r = deflate(&ds, "X", &ones, "R").unwrap();
        assert_eq!(column(&r, "R"), column(&r, "X"));

        let zero: BTreeMap<i32, f64> = [(1990, 0.0), (1991, 1.0)].into();
        assert!(matches!(deflate(&ds, "X", &zero, "R"), Err(Error::Domain(_))));
        let short: BTreeMap<i32, f64> = [(1990, 1.0)].into();
        assert!(matches!(deflate(&ds, "X", &short, "R"), Err(Error::Config(_))));
    }

    proptest! {
        #[test]
        fn growth_rate_multiplies_back(xs in prop::collection::vec(prop::option::of(-1e6f64..1e6), 1..12)) {
            let ds = derive_growth_rate(&series(&xs), "X", "G").unwrap();
            let g = column(&ds, "G");
            for t in 1..xs.len() {
                if let Some(rate) = g[t] {
                    let prev = xs[t - 1].unwrap();
                    let cur = xs[t].unwrap();
                    let back = prev * (1.0 + rate);
                    prop_assert!((back - cur).abs() <= 1e-9 * cur.abs().max(prev.abs()).max(1.0));
                }
            }
        }
    }
}
