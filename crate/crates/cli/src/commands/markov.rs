use std::path::PathBuf;

use anyhow::Result;
use segmap::markov::{
    change_frequencies, count_transitions, distribution_at_year, stationary_distribution, transition_matrix,
    write_distribution_table, Distribution, Stationary, StationaryOptions, TransitionMatrix,
};
use segmap::trajectory::TrajectorySet;
use serde_json::json;

use crate::run::Run;

#[derive(Debug, clap::Args)]
pub struct EstimateArgs {
    /// Trajectory CSV: `individual_id,<year columns...>`.
    #[arg(long)]
    pub trajectories: PathBuf,

    /// Label order, comma separated; sorted labels by default.
    #[arg(long, value_delimiter = ',')]
    pub alphabet: Vec<String>,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, default_value_t = 1_000_000)]
    pub max_iter: usize,
}

#[derive(Debug, clap::Args)]
pub struct StationaryArgs {
    /// Square matrix CSV with a header row and row labels.
    #[arg(long)]
    pub matrix: PathBuf,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, default_value_t = 1_000_000)]
    pub max_iter: usize,
}

fn stationary_json(st: &Stationary) -> serde_json::Value {
    json!({
        "alphabet": st.distribution.alphabet,
        "distribution": st.distribution.p,
        "eigenvalue": st.eigenvalue,
        "iterations": st.iterations,
        "averaged": st.averaged,
        "residual": st.residual,
        "linear_solve_gap": st.linear_solve_gap,
        "warnings": st.warnings,
    })
}

fn print_stationary(st: &Stationary) {
    let cells: Vec<String> = st
        .distribution
        .alphabet
        .iter()
        .zip(&st.distribution.p)
        .map(|(l, p)| format!("{l} {p:.4}"))
        .collect();
    println!("stationary: {}", cells.join("  "));
    println!("eigenvalue {:.6}, {} iterations{}", st.eigenvalue, st.iterations, if st.averaged { " (averaged)" } else { "" });
    for w in &st.warnings {
        eprintln!("warning: {w}");
    }
}

pub fn estimate(run: &mut Run, args: &EstimateArgs) -> Result<()> {
    let bytes = run.read(&args.trajectories)?;
    let alphabet = (!args.alphabet.is_empty()).then(|| args.alphabet.clone());
    let traj = TrajectorySet::read_csv(bytes.as_slice(), alphabet)?;
    let counts = count_transitions(&traj, true)?;
    let changes = count_transitions(&traj, false)?;
    let estimate = transition_matrix(&counts)?;
    for &r in &estimate.empty_rows {
        eprintln!("warning: label `{}` never left; its row is a self-loop", traj.alphabet()[r]);
    }
    run.write_with("transition-counts.csv", |w| counts.write_csv(w))?;
    run.write_with("transition-matrix.csv", |w| estimate.matrix.write_csv(w))?;
    if changes.total() > 0 {
        let freq = change_frequencies(&changes)?;
        run.write_with("changes.csv", |w| freq.write_csv(w))?;
        let total_pairs = traj.len() * traj.span().saturating_sub(1);
        println!(
            "{} label changes out of {total_pairs} consecutive pairs ({:.2}%)",
            freq.total_changes,
            100.0 * freq.total_changes as f64 / total_pairs.max(1) as f64
        );
    }

    let yearly: Vec<(String, Distribution)> = traj
        .years()
        .iter()
        .map(|&y| Ok((y.to_string(), distribution_at_year(&traj, y)?)))
        .collect::<segmap::Result<_>>()?;
    let options = StationaryOptions { tol: args.tol, max_iter: args.max_iter };
    let st = stationary_distribution(&estimate.matrix, options);
    let mut rows: Vec<(String, &Distribution)> = yearly.iter().map(|(y, d)| (y.clone(), d)).collect();
    if let Ok(s) = &st {
        rows.push(("stationary".into(), &s.distribution));
    }
    run.write_with("distributions.csv", |w| write_distribution_table(w, &rows))?;
    let st = st?;
    run.write_json("stationary.json", &stationary_json(&st))?;
    print_stationary(&st);
    Ok(())
}

pub fn stationary(run: &mut Run, args: &StationaryArgs) -> Result<()> {
    let bytes = run.read(&args.matrix)?;
    let matrix = TransitionMatrix::read_csv(bytes.as_slice())?;
    let st = stationary_distribution(&matrix, StationaryOptions { tol: args.tol, max_iter: args.max_iter })?;
    run.write_json("stationary.json", &stationary_json(&st))?;
    print_stationary(&st);
    Ok(())
}
