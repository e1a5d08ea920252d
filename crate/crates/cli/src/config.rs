//! `--config` files: JSON defaults spliced into the command line.
//!
//! ```json
//! { "seed": 7, "out_dir": "run1", "train": { "rows": 8, "cols": 8 }, "markov": { "stationary": { "tol": 1e-12 } } }
//! ```
//!
//! A value from the file is used only when its flag is absent from the
//! command line. Arrays become comma-separated lists; `true` adds a bare
//! switch and `false` leaves it out.

use std::fs;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

const SUBCOMMANDS: [&str; 7] = ["synth", "train", "group", "trajectories", "markov", "pca", "report"];

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

fn has_flag(argv: &[String], flag: &str) -> bool {
    argv.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn scalar(key: &str, v: &Value) -> Result<Option<String>> {
    Ok(match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(_) | Value::Null => None,
        Value::Array(items) => {
            let parts = items.iter().map(|x| scalar(key, x)?.with_context(|| format!("`{key}`: unsupported list item"))).collect::<Result<Vec<_>>>()?;
            Some(parts.join(","))
        }
        Value::Object(_) => bail!("config key `{key}` holds an object where a value was expected"),
    })
}

fn append(argv: &mut Vec<String>, table: &Map<String, Value>) -> Result<()> {
    for (key, value) in table {
        if value.is_object() || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if has_flag(argv, &flag) {
            continue;
        }
        match value {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            other => {
                if let Some(s) = scalar(key, other)? {
                    argv.push(flag);
                    argv.push(s);
                }
            }
        }
    }
    Ok(())
}

/// Returns the expanded argument list and the SHA-256 of the config file.
pub fn expand(mut argv: Vec<String>) -> Result<(Vec<String>, Option<String>)> {
    let Some(path) = config_path(&argv) else {
        return Ok((argv, None));
    };
    let bytes = fs::read(&path).with_context(|| format!("reading config `{path}`"))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let doc: Value = serde_json::from_slice(&bytes).with_context(|| format!("parsing config `{path}`"))?;
    let Value::Object(root) = doc else {
        bail!("config `{path}` must be a JSON object");
    };

    let sub = argv.iter().skip(1).position(|a| SUBCOMMANDS.contains(&a.as_str())).map(|p| p + 1);
    let mut tables = vec![root.clone()];
    if let Some(s) = sub {
        let name = argv[s].clone();
        if let Some(Value::Object(section)) = root.get(&name) {
            tables.push(section.clone());
            if name == "markov" {
                if let Some(action) = argv.get(s + 1) {
                    if let Some(Value::Object(inner)) = section.get(action) {
                        tables.push(inner.clone());
                    }
                }
            }
        }
    }
    for table in &tables {
        append(&mut argv, table)?;
    }
    Ok((argv, Some(digest)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn command_line_wins() {
        let mut argv = args("segmap train --rows 4");
        let table: Map<String, Value> =
            serde_json::from_str(r#"{"rows": 8, "cols": 6, "batch": true, "vars": ["A", "B"], "shuffle": false}"#).unwrap();
        append(&mut argv, &table).unwrap();
        assert_eq!(argv, args("segmap train --rows 4 --batch --cols 6 --vars A,B"));
    }

    #[test]
    fn nested_object_rejected_as_value() {
        assert!(scalar("k", &serde_json::json!([{"a": 1}])).is_err());
    }
}
