use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use segmap::grouping::SuperClassMap;
use segmap::trajectory::{build_trajectories, default_threshold, occupancy_report, stability_census, Granularity};

use super::{load, load_codebook, main_map, parse_years};
use crate::run::Run;
use crate::GranularityArg;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long)]
    pub codebook: PathBuf,

    /// Super-class map from `group`; needed for super and main granularity.
    #[arg(long)]
    pub groups: Option<PathBuf>,

    #[arg(long)]
    pub main_map: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = GranularityArg::Unit)]
    pub granularity: GranularityArg,

    #[arg(long)]
    pub years: Option<String>,

    /// Minimum occupancy for a dominant position; T/2 + 1 by default.
    #[arg(long)]
    pub threshold: Option<usize>,

    /// Occupancy that makes an individual a stayer; all years by default.
    #[arg(long)]
    pub min_years: Option<usize>,

    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let panel = load(run, &args.input, &args.categorical)?;
    let years = parse_years(args.years.as_deref(), &panel)?;
    let (doc, cb) = load_codebook(run, &args.codebook)?;
    let params = doc.standardization.as_ref().context("codebook carries no standardization parameters")?;
    let groups: Option<SuperClassMap> = args.groups.as_ref().map(|p| run.read_json(p)).transpose()?;
    let main = match (&groups, args.granularity) {
        (Some(g), GranularityArg::Main) => Some(main_map(run, args.main_map.as_deref(), g)?),
        _ => None,
    };
    let granularity = match (args.granularity, &groups, &main) {
        (GranularityArg::Unit, _, _) => Granularity::Unit,
        (GranularityArg::Super, Some(g), _) => Granularity::Super(g),
        (GranularityArg::Main, Some(g), Some(m)) => Granularity::Main(g, m),
        _ => bail!("--granularity {} needs --groups", args.granularity.name()),
    };
    let traj = build_trajectories(&panel, &years, params, &cb, granularity)?;
    let threshold = args.threshold.unwrap_or_else(|| default_threshold(traj.span()));
    let min_years = args.min_years.unwrap_or(traj.span());
    run.record("threshold", &threshold)?;
    run.record("years", &years)?;

    let report = occupancy_report(&traj, threshold)?;
    let census = stability_census(&traj, min_years)?;
    let g = args.granularity.name();
    run.write_with(&format!("trajectories-{g}.csv"), |w| traj.write_csv(w))?;
    run.write_with(&format!("occupancy-{g}.csv"), |w| report.write_csv(w))?;
    run.write_json(&format!("census-{g}.json"), &census)?;
    println!(
        "{} trajectories over {} labels; {} distinct, {} stayers (≥ {min_years} years), {} without a dominant position",
        traj.len(),
        traj.alphabet().len(),
        census.distinct_trajectories,
        census.stayers,
        report.no_dominant.size
    );
    Ok(())
}
