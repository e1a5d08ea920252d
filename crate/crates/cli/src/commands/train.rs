use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use segmap::panel::{apply_standardization, fit_standardization, pool_years};
use segmap::som::{init_codebook, train_batch, train_online, CodeBookDocument, InitMethod, Topology, TrainingSchedule};

use super::{load, parse_years, select_variables};
use crate::run::Run;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitArg {
    Sample,
    UniformBox,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Panel CSV: `individual_id,year,<variables...>`.
    #[arg(long)]
    pub input: PathBuf,

    /// Years to pool, e.g. `1984-1992`; all years by default.
    #[arg(long)]
    pub years: Option<String>,

    /// Grid rows; 1 trains a chain of `--cols` units.
    #[arg(long, default_value_t = 8)]
    pub rows: usize,

    #[arg(long, default_value_t = 8)]
    pub cols: usize,

    /// Training schedule as JSON; defaults to 50 epochs with linearly
    /// shrinking learning rate and radius.
    #[arg(long)]
    pub schedule_file: Option<PathBuf>,

    /// Variables to train on, comma separated; all numeric columns by default.
    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,

    /// Columns holding category labels rather than numbers.
    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,

    /// Batch training instead of sequential updates.
    #[arg(long)]
    pub batch: bool,

    #[arg(long, value_enum, default_value_t = InitArg::Sample)]
    pub init: InitArg,
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let panel = load(run, &args.input, &args.categorical)?;
    let years = parse_years(args.years.as_deref(), &panel)?;
    let codes = select_variables(&panel, &args.vars)?;
    let topology = match (args.rows, args.cols) {
        (0, _) | (_, 0) => bail!("--rows and --cols must be positive"),
        (1, c) => Topology::chain(c)?,
        (r, c) => Topology::grid2d(r, c)?,
    };

    let pooled = pool_years(&panel, &years, &codes)?;
    let (pooled, dropped) = pooled.drop_empty_rows();
    if dropped > 0 {
        eprintln!("note: {dropped} records with no observed variable left out of training");
    }
    let params = fit_standardization(&pooled)?;
    let data = apply_standardization(&params, &pooled)?;

    let seed = run.seed();
    let schedule: TrainingSchedule = match &args.schedule_file {
        Some(p) => run.read_json(p)?,
        None => TrainingSchedule::default_for(&topology, seed),
    };
    let init = match args.init {
        InitArg::Sample => InitMethod::Sample,
        InitArg::UniformBox => InitMethod::UniformBox,
    };
    run.record_seed("init", seed);
    run.record_seed("schedule", schedule.seed);
    run.record("schedule", &schedule)?;
    run.record("catalog", &codes)?;
    run.record("years", &years)?;

    let start = init_codebook(topology, &data, seed, init)?;
    let outcome = if args.batch { train_batch(&start, &data, &schedule)? } else { train_online(&start, &data, &schedule)? };
    let doc = CodeBookDocument {
        topology,
        dimension: codes.len(),
        weights: outcome.codebook.weights().to_vec(),
        codes,
        standardization: Some(params),
        seed,
        init,
        schedule,
        quantization_errors: outcome.quantization_errors.clone(),
    };
    run.write_json("codebook.json", &doc)?;
    let mut trace = String::from("epoch,quantization_error\n");
    for (e, q) in outcome.quantization_errors.iter().enumerate() {
        trace.push_str(&format!("{},{q}\n", e + 1));
    }
    run.write("quantization-error.csv", trace.as_bytes())?;
    println!(
        "trained {} units on {} records × {} variables; final quantization error {:.4}",
        topology.unit_count(),
        data.n_rows(),
        data.n_cols(),
        outcome.quantization_errors.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}
