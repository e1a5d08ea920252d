use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::panel::{ObservationMatrix, PanelDataset, RowOrigin};

fn check_labels(n_rows: usize, labels: &[usize], classes: &[String]) -> Result<()> {
    if labels.len() != n_rows {
        return Err(Error::config(format!("{} labels for {n_rows} rows", labels.len())));
    }
    if let Some(&l) = labels.iter().find(|&&l| l >= classes.len()) {
        return Err(Error::config(format!("label index {l} outside {} classes", classes.len())));
    }
    Ok(())
}

/// Overall and per-class variable means.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMeans {
    pub codes: Vec<String>,
    pub classes: Vec<String>,
    pub overall_size: usize,
    pub overall: Vec<Option<f64>>,
    pub sizes: Vec<usize>,
    /// `means[class][variable]`, `None` where the class has no observed value.
    pub means: Vec<Vec<Option<f64>>>,
}

fn mean_of(acc: (f64, usize)) -> Option<f64> {
    (acc.1 > 0).then(|| acc.0 / acc.1 as f64)
}

/// Means over observed cells, overall and per class. `labels[i]` indexes
/// into `classes`.
pub fn class_means(matrix: &ObservationMatrix, labels: &[usize], classes: &[String]) -> Result<ClassMeans> {
    check_labels(matrix.n_rows(), labels, classes)?;
    let d = matrix.n_cols();
    let mut per_class = vec![vec![(0.0, 0usize); d]; classes.len()];
    let mut overall = vec![(0.0, 0usize); d];
    let mut sizes = vec![0; classes.len()];
    for (row, &c) in matrix.rows().zip(labels) {
        sizes[c] += 1;
        for (j, x) in row.observed() {
            per_class[c][j].0 += x;
            per_class[c][j].1 += 1;
            overall[j].0 += x;
            overall[j].1 += 1;
        }
    }
    Ok(ClassMeans {
        codes: matrix.codes().to_vec(),
        classes: classes.to_vec(),
        overall_size: matrix.n_rows(),
        overall: overall.into_iter().map(mean_of).collect(),
        sizes,
        means: per_class.into_iter().map(|c| c.into_iter().map(mean_of).collect()).collect(),
    })
}

fn fmt_cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl ClassMeans {
    /// `variable,overall,<class...>` with one row per variable and a final
    /// `size` row. Masked means are empty cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["variable".to_string(), "overall".to_string()];
        header.extend(self.classes.iter().cloned());
        w.write_record(&header)?;
        for (j, code) in self.codes.iter().enumerate() {
            let mut rec = vec![code.clone(), fmt_cell(self.overall[j])];
            rec.extend(self.means.iter().map(|m| fmt_cell(m[j])));
            w.write_record(&rec)?;
        }
        let mut rec = vec!["size".to_string(), self.overall_size.to_string()];
        rec.extend(self.sizes.iter().map(usize::to_string));
        w.write_record(&rec)?;
        w.flush()?;
        Ok(())
    }
}

/// Column percentages of one categorical attribute, overall and per class.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    pub attribute: String,
    pub categories: Vec<String>,
    pub classes: Vec<String>,
    /// Percentages per category over all rows with an observed category.
    pub overall: Vec<f64>,
    /// Per class; `None` flags a class with no observed category.
    pub columns: Vec<Option<Vec<f64>>>,
}

/// Frequencies of `attribute` over the rows described by `origins`,
/// grouped by `labels`.
pub fn qualitative_frequencies(
    dataset: &PanelDataset,
    attribute: &str,
    origins: &[RowOrigin],
    labels: &[usize],
    classes: &[String],
) -> Result<FrequencyTable> {
    check_labels(origins.len(), labels, classes)?;
    let mut counts: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (o, &c) in origins.iter().zip(labels) {
        let t = dataset
            .year_index(o.year)
            .ok_or_else(|| Error::config(format!("year {} not in dataset", o.year)))?;
        if let Some(cat) = dataset.categorical(attribute, o.individual, t)? {
            counts.entry(cat.to_string()).or_insert_with(|| vec![0; classes.len()])[c] += 1;
        }
    }
    // unknown attributes must fail even on an empty selection
    if origins.is_empty() && !dataset.categorical_names().any(|n| n == attribute) {
        return Err(Error::config(format!("unknown categorical attribute `{attribute}`")));
    }
    let categories: Vec<String> = counts.keys().cloned().collect();
    let percent = |col: &[usize]| -> Option<Vec<f64>> {
        let total: usize = col.iter().sum();
        (total > 0).then(|| col.iter().map(|&n| 100.0 * n as f64 / total as f64).collect())
    };
    let overall_counts: Vec<usize> = counts.values().map(|v| v.iter().sum()).collect();
    let columns = (0..classes.len())
        .map(|c| percent(&counts.values().map(|v| v[c]).collect::<Vec<_>>()))
        .collect();
    Ok(FrequencyTable {
        attribute: attribute.to_string(),
        categories,
        classes: classes.to_vec(),
        overall: percent(&overall_counts).unwrap_or_default(),
        columns,
    })
}

impl FrequencyTable {
    /// `category,overall,<class...>`; an empty class has empty cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![self.attribute.clone(), "overall".to_string()];
        header.extend(self.classes.iter().cloned());
        w.write_record(&header)?;
        for (i, cat) in self.categories.iter().enumerate() {
            let mut rec = vec![cat.clone(), fmt_cell(self.overall.get(i).copied())];
            rec.extend(self.columns.iter().map(|c| fmt_cell(c.as_ref().map(|v| v[i]))));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn single_class_mean() {
        let m = ObservationMatrix::from_dense(vec!["x".into(), "y".into()], &[vec![0.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let r = class_means(&m, &[0, 0], &names(1)).unwrap();
        assert_eq!(r.means[0], [Some(1.0), Some(3.0)]);
        assert_eq!(r.means[0], r.overall);
        assert_eq!(r.sizes, [2]);
    }

    #[test]
    fn masked_cells_excluded() {
        // class 0: x = {1, missing}, class 1: x = {4}; overall x = (1 + 4) / 2
        let m = ObservationMatrix::from_rows(
            vec!["x".into(), "y".into()],
            &[vec![Some(1.0), Some(10.0)], vec![None, Some(20.0)], vec![Some(4.0), None]],
        )
        .unwrap();
        let r = class_means(&m, &[0, 0, 1], &names(2)).unwrap();
        assert_eq!(r.means[0], [Some(1.0), Some(15.0)]);
        assert_eq!(r.means[1], [Some(4.0), None]);
        assert_eq!(r.overall, [Some(2.5), Some(15.0)]);
        assert_eq!(r.sizes, [2, 1]);
    }

    #[test]
    fn empty_class_reported() {
        let m = ObservationMatrix::from_dense(vec!["x".into()], &[vec![1.0]]).unwrap();
        let r = class_means(&m, &[1], &names(3)).unwrap();
        assert_eq!(r.sizes, [0, 1, 0]);
        assert_eq!(r.means[0], [None]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "variable,overall,1,2,3\nx,1,,1,\nsize,1,0,1,0\n");
    }

    #[test]
    fn weighted_class_means_recombine() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i * 7 % 11) as f64 * 0.3, (i as f64).sin()]).collect();
        let labels: Vec<usize> = (0..30).map(|i| i % 4).collect();
        let m = ObservationMatrix::from_dense(vec!["x".into(), "y".into()], &rows).unwrap();
        let r = class_means(&m, &labels, &names(4)).unwrap();
        for j in 0..2 {
            let recombined: f64 = (0..4).map(|c| r.sizes[c] as f64 * r.means[c][j].unwrap()).sum::<f64>() / 30.0;
            assert!((recombined - r.overall[j].unwrap()).abs() < 1e-10);
        }
    }

    fn categorical_panel(cats: &[(&str, Option<&str>)]) -> (PanelDataset, Vec<RowOrigin>) {
        let ids = (0..cats.len()).map(|i| format!("p{i}")).collect();
        let mut ds = PanelDataset::new(ids, vec![1992], vec![]).unwrap();
        for (i, (attr, v)) in cats.iter().enumerate() {
            ds.set_categorical(attr, i, 0, v.map(str::to_string));
        }
        let origins = (0..cats.len()).map(|i| RowOrigin { individual: i, year: 1992 }).collect();
        (ds, origins)
    }

    #[test]
    fn frequencies_single_class() {
        let (ds, origins) = categorical_panel(&[("E", Some("x")), ("E", Some("x")), ("E", Some("y")), ("E", Some("x"))]);
        let t = qualitative_frequencies(&ds, "E", &origins, &[0, 0, 0, 0], &names(1)).unwrap();
        assert_eq!(t.categories, ["x", "y"]);
        assert_eq!(t.columns[0].as_deref(), Some(&[75.0, 25.0][..]));
        assert_eq!(t.overall, [75.0, 25.0]);
    }

    #[test]
    fn frequencies_empty_and_identical_classes() {
        let (ds, origins) = categorical_panel(&[("E", Some("x")), ("E", Some("y")), ("E", Some("x")), ("E", Some("y"))]);
        let t = qualitative_frequencies(&ds, "E", &origins, &[0, 0, 2, 2], &names(3)).unwrap();
        assert!(t.columns[1].is_none());
        assert_eq!(t.columns[0], t.columns[2]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "E,overall,1,2,3\nx,50,50,,50\ny,50,50,,50\n");
    }

    #[test]
    fn frequencies_unknown_attribute() {
        let (ds, origins) = categorical_panel(&[("E", Some("x"))]);
        assert!(matches!(
            qualitative_frequencies(&ds, "RACE", &origins, &[0], &names(1)),
            Err(Error::Config(_))
        ));
        assert!(matches!(qualitative_frequencies(&ds, "RACE", &[], &[], &names(1)), Err(Error::Config(_))));
    }
}
