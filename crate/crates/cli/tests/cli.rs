use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn segmap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segmap"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = segmap(dir, args);
    assert!(
        out.status.success(),
        "segmap {args:?} failed: {}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const FAST_SCHEDULE: &str = r#"{
  "epochs": 10,
  "learning_rate": {"start": 0.5, "end": 0.01, "decay": "linear"},
  "radius": {"start": 2.0, "end": 0.0, "decay": "linear"},
  "kernel": "hard",
  "seed": 5,
  "shuffle": true
}"#;

/// A small synthetic panel and a trained 4×4 map in `run/`.
fn trained(dir: &Path) -> PathBuf {
    fs::write(dir.join("schedule.json"), FAST_SCHEDULE).unwrap();
    ok(dir, &["synth", "--out-dir", "run", "--seed", "5", "--individuals", "400", "--years", "2000-2004"]);
    ok(
        dir,
        &["train", "--out-dir", "run", "--seed", "5", "--input", "run/panel.csv", "--rows", "4", "--cols", "4", "--schedule-file", "schedule.json"],
    );
    dir.join("run")
}

fn assert_svg(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{} is not XML: {e}", path.display()));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    text
}

#[test]
fn pipeline_end_to_end() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let run = trained(dir);
    let codebook: serde_json::Value = serde_json::from_slice(&fs::read(run.join("codebook.json")).unwrap()).unwrap();
    assert_eq!(codebook["weights"].as_array().unwrap().len(), 16 * 15);
    let trace = fs::read_to_string(run.join("quantization-error.csv")).unwrap();
    assert_eq!(trace.lines().count(), 11);

    ok(dir, &["group", "--out-dir", "run", "--seed", "5", "--codebook", "run/codebook.json", "--k", "7", "--restarts", "3"]);
    let main: serde_json::Value = serde_json::from_slice(&fs::read(run.join("mainclasses.json")).unwrap()).unwrap();
    assert_eq!(main, serde_json::json!({"1": "A", "2": "B", "3": "A", "4": "B", "5": "B", "6": "C", "7": "D"}));

    ok(
        dir,
        &["trajectories", "--out-dir", "run", "--input", "run/panel.csv", "--codebook", "run/codebook.json", "--groups", "run/superclasses.json", "--granularity", "main"],
    );
    let traj = fs::read_to_string(run.join("trajectories-main.csv")).unwrap();
    let mut lines = traj.lines();
    assert_eq!(lines.next().unwrap(), "individual_id,2000,2001,2002,2003,2004");
    for line in lines {
        assert!(line.split(',').skip(1).all(|l| ["A", "B", "C", "D"].contains(&l)), "{line}");
    }
    ok(dir, &["trajectories", "--out-dir", "run", "--input", "run/panel.csv", "--codebook", "run/codebook.json"]);

    let out = ok(dir, &["markov", "estimate", "--out-dir", "run", "--trajectories", "run/trajectories-main.csv"]);
    assert!(out.contains("stationary:"), "{out}");
    for f in ["transition-counts.csv", "transition-matrix.csv", "distributions.csv", "stationary.json", "manifest-markov-estimate.json"] {
        assert!(run.join(f).exists(), "{f} missing");
    }

    ok(dir, &["pca", "--out-dir", "run", "--input", "run/panel.csv"]);
    ok(
        dir,
        &[
            "report", "--out-dir", "run", "--codebook", "run/codebook.json", "--groups", "run/superclasses.json", "--trajectories",
            "run/trajectories-unit.csv", "--individual", "ind1,ind2", "--input", "run/panel.csv", "--pca", "run/pca.json",
        ],
    );
    for f in ["profiles.svg", "partition.svg", "superclass-sizes.svg", "superclass-profiles.svg", "trajectories.svg", "pca-1-2.svg"] {
        assert_svg(&run.join(f));
    }
    let means = fs::read_to_string(run.join("class-means.csv")).unwrap();
    assert!(means.starts_with("variable,overall,1,2,3,4,5,6,7"));
    let profiles = assert_svg(&run.join("profiles.svg"));
    assert_eq!(profiles.matches("<polyline").count(), 16);
}

#[test]
fn training_repeats_bit_for_bit() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let run = trained(dir);
    let first = fs::read(run.join("codebook.json")).unwrap();
    let out = segmap(
        dir,
        &["train", "--out-dir", "run", "--seed", "5", "--input", "run/panel.csv", "--rows", "4", "--cols", "4", "--schedule-file", "schedule.json", "--verify-manifest"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest verified"));
    assert_eq!(fs::read(run.join("codebook.json")).unwrap(), first);

    let out = segmap(
        dir,
        &["train", "--out-dir", "run", "--seed", "6", "--input", "run/panel.csv", "--rows", "4", "--cols", "4", "--schedule-file", "schedule.json", "--verify-manifest"],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("codebook.json"));
}

#[test]
fn single_row_trains_a_chain() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    trained(dir);
    ok(dir, &["train", "--out-dir", "chain", "--input", "run/panel.csv", "--rows", "1", "--cols", "7", "--schedule-file", "schedule.json"]);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("chain/codebook.json")).unwrap()).unwrap();
    assert_eq!(doc["topology"], serde_json::json!({"kind": "chain", "length": 7}));
}

#[test]
fn k_equal_to_unit_count_and_custom_main_map() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let run = trained(dir);
    ok(dir, &["group", "--out-dir", "run", "--codebook", "run/codebook.json", "--k", "16"]);
    let groups: serde_json::Value = serde_json::from_slice(&fs::read(run.join("superclasses.json")).unwrap()).unwrap();
    let mut labels: Vec<u64> = groups["unit_to_super"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    labels.sort_unstable();
    assert_eq!(labels, (1..=16).collect::<Vec<_>>());

    fs::write(dir.join("map.json"), r#"{"1": "low", "2": "low", "3": "high"}"#).unwrap();
    ok(dir, &["group", "--out-dir", "run", "--codebook", "run/codebook.json", "--k", "3", "--main-map", "map.json", "--restarts", "2"]);
    ok(
        dir,
        &["trajectories", "--out-dir", "run", "--input", "run/panel.csv", "--codebook", "run/codebook.json", "--groups", "run/superclasses.json", "--main-map", "map.json", "--granularity", "main"],
    );
    let traj = fs::read_to_string(run.join("trajectories-main.csv")).unwrap();
    assert!(traj.lines().skip(1).flat_map(|l| l.split(',').skip(1)).all(|l| l == "low" || l == "high"));

    fs::write(dir.join("short.json"), r#"{"1": "low"}"#).unwrap();
    let out = segmap(dir, &["group", "--out-dir", "run", "--codebook", "run/codebook.json", "--k", "3", "--main-map", "short.json"]);
    assert_eq!(code(&out), 1);
    let out = segmap(dir, &["group", "--out-dir", "run", "--codebook", "run/codebook.json", "--k", "17"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn stationary_of_the_printed_matrix() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("printed.csv"),
        ",A,B,C,D\nA,0.57,0.24,0.08,0.11\nB,0.06,0.78,0.02,0.14\nC,0.04,0.14,0.85,0.06\nD,0.04,0.04,0.05,0.77\n",
    )
    .unwrap();
    let out = ok(dir, &["markov", "stationary", "--out-dir", "m", "--matrix", "printed.csv"]);
    assert!(out.contains("A 0.1022  B 0.3368  C 0.2292  D 0.3318"), "{out}");
    let st: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("m/stationary.json")).unwrap()).unwrap();
    let pi: Vec<f64> = st["distribution"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (p, printed) in pi.iter().zip([0.106, 0.363, 0.209, 0.322]) {
        assert!((p - printed).abs() <= 0.04);
    }
    assert_eq!(st["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn numerical_failures_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("reducible.csv"), ",A,B\nA,1,0\nB,0.5,0.5\n").unwrap();
    let out = segmap(dir, &["markov", "stationary", "--matrix", "reducible.csv"]);
    assert_eq!(code(&out), 2);
    let out = segmap(dir, &["markov", "stationary", "--matrix", "reducible.csv", "--verify-manifest"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn periodic_chain_settles_by_averaging() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("periodic.csv"), ",A,B\nA,0,1\nB,1,0\n").unwrap();
    let out = ok(dir, &["markov", "stationary", "--out-dir", "m", "--matrix", "periodic.csv"]);
    assert!(out.contains("A 0.5000  B 0.5000"), "{out}");
}

#[test]
fn contract_errors_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let out = segmap(dir, &["train", "--input", "absent.csv"]);
    assert_eq!(code(&out), 1);
    fs::write(dir.join("bad.csv"), "individual_id,year,X\n1,2000,1.0\n1,2001,oops\n").unwrap();
    let out = segmap(dir, &["train", "--input", "bad.csv"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&out.stderr));
    let out = segmap(dir, &["train", "--no-such-flag"]);
    assert_eq!(code(&out), 1);
    let out = segmap(dir, &["report", "--codebook", "missing.json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn two_by_two_report_has_four_panels() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    trained(dir);
    ok(dir, &["train", "--out-dir", "toy", "--input", "run/panel.csv", "--rows", "2", "--cols", "2", "--schedule-file", "schedule.json"]);
    ok(dir, &["report", "--out-dir", "toy", "--codebook", "toy/codebook.json"]);
    let first = assert_svg(&dir.join("toy/profiles.svg"));
    assert_eq!(first.matches("<polyline").count(), 4);
    ok(dir, &["report", "--out-dir", "toy", "--codebook", "toy/codebook.json", "--verify-manifest"]);
    assert_eq!(fs::read_to_string(dir.join("toy/profiles.svg")).unwrap(), first);
}

#[test]
fn config_file_supplies_defaults() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    trained(dir);
    fs::write(dir.join("cfg.json"), r#"{"out_dir": "cfg", "seed": 9, "group": {"k": 4, "restarts": 2}}"#).unwrap();
    ok(dir, &["group", "--config", "cfg.json", "--codebook", "run/codebook.json"]);
    let groups: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("cfg/superclasses.json")).unwrap()).unwrap();
    assert_eq!(groups["k"], 4);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("cfg/manifest-group.json")).unwrap()).unwrap();
    assert_eq!(manifest["seeds"]["global"], 9);
    assert_eq!(manifest["config_digest"].as_str().unwrap().len(), 64);
}
