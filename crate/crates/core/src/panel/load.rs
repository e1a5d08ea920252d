use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use super::dataset::{check_years, PanelDataset};
use crate::error::{Error, Result};

pub const ID_COLUMN: &str = "individual_id";
pub const YEAR_COLUMN: &str = "year";

/// Which non-key columns hold category labels rather than numbers.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub categorical: Vec<String>,
}

enum Column {
    Numeric(usize),
    Categorical(String),
}

struct Row {
    individual: usize,
    year: i32,
    numeric: Vec<Option<f64>>,
    labels: Vec<(String, Option<String>)>,
}

/// Reads a long-format panel: one CSV row per (individual, year).
///
/// Individuals keep their order of first appearance. A year for which an
/// individual has no row is stored fully masked.
pub fn load_panel<R: Read>(source: R, options: &LoadOptions) -> Result<PanelDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = reader.headers()?.clone();
    if header.get(0) != Some(ID_COLUMN) || header.get(1) != Some(YEAR_COLUMN) {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must start with `{ID_COLUMN},{YEAR_COLUMN}`"),
        });
    }
    for name in &options.categorical {
        if !header.iter().skip(2).any(|h| h == name) {
            return Err(Error::config(format!("categorical column `{name}` not in header")));
        }
    }
    let mut variables = Vec::new();
    let columns: Vec<Column> = header
        .iter()
        .skip(2)
        .map(|h| {
            if options.categorical.iter().any(|c| c == h) {
                Column::Categorical(h.to_string())
            } else {
                variables.push(h.to_string());
                Column::Numeric(variables.len() - 1)
            }
        })
        .collect();

    let mut ids: Vec<String> = Vec::new();
    let mut id_index: HashMap<String, usize> = HashMap::new();
    let mut seen: HashMap<(usize, i32), u64> = HashMap::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(Error::Parse { line, message: "empty individual_id".into() });
        }
        let year: i32 = record[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("year `{}` is not an integer", &record[1]),
        })?;
        let next = ids.len();
        let individual = *id_index.entry(id.clone()).or_insert_with(|| {
            ids.push(id.clone());
            next
        });
        if seen.insert((individual, year), line).is_some() {
            return Err(Error::Duplicate { individual: id, year, line });
        }
        let mut numeric = vec![None; variables.len()];
        let mut labels = Vec::new();
        for (field, column) in record.iter().skip(2).zip(&columns) {
            match column {
                Column::Numeric(j) => {
                    if field.is_empty() {
                        continue;
                    }
                    let x: f64 = field.parse().ok().filter(|x: &f64| x.is_finite()).ok_or_else(|| {
                        Error::Parse {
                            line,
                            message: format!("`{}` is not a number in column `{}`", field, variables[*j]),
                        }
                    })?;
                    numeric[*j] = Some(x);
                }
                Column::Categorical(name) => {
                    let label = (!field.is_empty()).then(|| field.to_string());
                    labels.push((name.clone(), label));
                }
            }
        }
        rows.push(Row { individual, year, numeric, labels });
    }

    let years: Vec<i32> = rows.iter().map(|r| r.year).collect::<BTreeSet<_>>().into_iter().collect();
    check_years(&years)?;
    let mut ds = PanelDataset::new(ids, years.clone(), variables)?;
    for r in rows {
        let t = years.binary_search(&r.year).expect("year collected above");
        for (j, x) in r.numeric.into_iter().enumerate() {
            ds.set(r.individual, t, j, x);
        }
        for (name, label) in r.labels {
            ds.set_categorical(&name, r.individual, t, label);
        }
    }
    Ok(ds)
}

/// Writes the dataset in the long format read by [`load_panel`]; masked
/// cells are empty and categorical columns follow the numeric ones.
pub fn write_panel<W: Write>(out: W, ds: &PanelDataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let names: Vec<String> = ds.categorical_names().map(str::to_string).collect();
    let mut header = vec![ID_COLUMN.to_string(), YEAR_COLUMN.to_string()];
    header.extend(ds.variables().iter().cloned());
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    let (n, _, d) = ds.shape();
    for i in 0..n {
        for (t, year) in ds.years().iter().enumerate() {
            let mut record = vec![ds.individual_ids()[i].clone(), year.to_string()];
            record.extend((0..d).map(|j| ds.get(i, t, j).map_or_else(String::new, |x| x.to_string())));
            for name in &names {
                record.push(ds.categorical(name, i, t)?.unwrap_or_default().to_string());
            }
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a two-column `year,deflator` table.
pub fn load_deflators<R: Read>(source: R) -> Result<BTreeMap<i32, f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut out = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |message: String| Error::Parse { line, message };
        if record.len() != 2 {
            return Err(parse_err(format!("expected 2 fields, found {}", record.len())));
        }
        let year: i32 = record[0]
            .parse()
            .map_err(|_| parse_err(format!("year `{}` is not an integer", &record[0])))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| parse_err(format!("deflator `{}` is not a number", &record[1])))?;
        if out.insert(year, value).is_some() {
            return Err(parse_err(format!("duplicate deflator year {year}")));
        }
    }
    Ok(out)
}
