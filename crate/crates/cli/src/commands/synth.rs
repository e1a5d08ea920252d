use std::path::PathBuf;

use anyhow::Result;
use segmap::panel::{default_catalog, write_panel};
use segmap::synth::{generate_panel, SynthConfig};

use super::parse_int_list;
use crate::run::Run;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Full generator configuration as JSON; its own seed is used.
    #[arg(long)]
    pub synth_config: Option<PathBuf>,

    /// Cohort size for the built-in four-class configuration.
    #[arg(long, default_value_t = 2500)]
    pub individuals: usize,

    #[arg(long, default_value = "1984-1992")]
    pub years: String,

    /// Distance between class means, in spreads.
    #[arg(long, default_value_t = 6.0)]
    pub separation: f64,

    #[arg(long, default_value_t = 0.05)]
    pub missing_rate: f64,
}

/// Four latent classes over the default catalog, moving with the
/// row-normalized estimated transition matrix and starting from the 1984
/// class shares of the survey cohort.
fn builtin(args: &Args, seed: u64) -> Result<SynthConfig> {
    let table = [[0.57, 0.24, 0.08, 0.11], [0.06, 0.78, 0.02, 0.14], [0.04, 0.14, 0.85, 0.06], [0.04, 0.04, 0.05, 0.77]];
    let latent_p = table
        .iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|x| x / s).collect()
        })
        .collect();
    let years = parse_int_list(&args.years)?.into_iter().map(|y| y as i32).collect();
    Ok(SynthConfig::separated(
        default_catalog().codes(),
        latent_p,
        vec![0.138, 0.400, 0.181, 0.281],
        args.separation,
        args.individuals,
        years,
        args.missing_rate,
        seed,
    ))
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let config = match &args.synth_config {
        Some(path) => run.read_json(path)?,
        None => builtin(args, run.seed())?,
    };
    run.record_seed("synth", config.seed);
    let (panel, latent) = generate_panel(&config)?;
    run.write_json("synth-config.json", &config)?;
    run.write_with("panel.csv", |w| write_panel(w, &panel))?;
    run.write_with("latent.csv", |w| latent.write_csv(w))?;
    println!(
        "{} individuals × {} years × {} variables, {} latent classes",
        config.n_individuals,
        config.years.len(),
        config.codes.len(),
        config.class_count()
    );
    Ok(())
}
