//! `segmap`: panel segmentation with Kohonen maps and Markov analysis of
//! the resulting trajectories.
//!
//! Every subcommand writes its artifacts and a `manifest-<command>.json`
//! into `--out-dir`. Exit codes: 0 success, 1 usage or contract error,
//! 2 numerical failure (non-convergence, reducible chain).

mod commands;
mod config;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "segmap", version, about = "Kohonen segmentation of panel data and Markov analysis of trajectories")]
struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory receiving artifacts and the run manifest.
    #[arg(long, global = true, default_value = "segmap-out")]
    out_dir: PathBuf,

    /// JSON file of default flag values: top-level keys for global flags,
    /// one object per subcommand for the rest.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Re-run and require the artifact digests recorded in the existing
    /// manifest of this subcommand.
    #[arg(long, global = true)]
    verify_manifest: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic panel with known latent class dynamics.
    Synth(commands::synth::Args),
    /// Train a Kohonen map on the pooled, standardized panel.
    Train(commands::train::Args),
    /// Reduce a trained map to ordered super-classes and main classes.
    Group(commands::group::Args),
    /// Project every (individual, year) record and build trajectories.
    Trajectories(commands::trajectories::Args),
    /// Transition counts, matrices and stationary distributions.
    Markov {
        #[command(subcommand)]
        action: MarkovCommand,
    },
    /// Principal components of the correlation matrix.
    Pca(commands::pca::Args),
    /// Render figures and class tables from earlier artifacts.
    Report(commands::report::Args),
}

#[derive(Debug, Subcommand)]
enum MarkovCommand {
    /// Estimate a transition matrix from a trajectory file.
    Estimate(commands::markov::EstimateArgs),
    /// Stationary distribution of a transition matrix file.
    Stationary(commands::markov::StationaryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Unit,
    Super,
    Main,
}

impl GranularityArg {
    pub fn name(self) -> &'static str {
        match self {
            Self::Unit => "unit",
            Self::Super => "super",
            Self::Main => "main",
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<segmap::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let (argv, config_digest) = match config::expand(argv) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let name = match &cli.command {
        Command::Markov { action: MarkovCommand::Estimate(_) } => "markov-estimate",
        Command::Markov { action: MarkovCommand::Stationary(_) } => "markov-stationary",
        Command::Synth(_) => "synth",
        Command::Train(_) => "train",
        Command::Group(_) => "group",
        Command::Trajectories(_) => "trajectories",
        Command::Pca(_) => "pca",
        Command::Report(_) => "report",
    };
    let arguments: Vec<String> = argv.iter().skip(1).filter(|a| *a != "--verify-manifest").cloned().collect();
    let result = run::Run::start(&cli.out_dir, name, arguments, config_digest, cli.seed, cli.verify_manifest)
        .and_then(|mut run| {
            match &cli.command {
                Command::Synth(a) => commands::synth::run(&mut run, a),
                Command::Train(a) => commands::train::run(&mut run, a),
                Command::Group(a) => commands::group::run(&mut run, a),
                Command::Trajectories(a) => commands::trajectories::run(&mut run, a),
                Command::Markov { action: MarkovCommand::Estimate(a) } => commands::markov::estimate(&mut run, a),
                Command::Markov { action: MarkovCommand::Stationary(a) } => commands::markov::stationary(&mut run, a),
                Command::Pca(a) => commands::pca::run(&mut run, a),
                Command::Report(a) => commands::report::run(&mut run, a),
            }?;
            run.finish()
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
