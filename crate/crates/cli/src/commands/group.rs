use std::path::PathBuf;

use anyhow::{bail, Result};
use segmap::grouping::{reduce_superclasses, ReductionOptions};

use super::{load_codebook, main_map, parse_int_list};
use crate::run::Run;

const DEFAULT_ORIENTATION: &str = "RSALH";

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub codebook: PathBuf,

    /// Number of super-classes.
    #[arg(long, default_value_t = 7)]
    pub k: usize,

    /// Variable that must increase from super-class 1 to k; RSALH when the
    /// map has it.
    #[arg(long)]
    pub orient_var: Option<String>,

    /// JSON object from super-class number to main-class name.
    #[arg(long)]
    pub main_map: Option<PathBuf>,

    /// Also report quantization error for a range of k, e.g. `2-10`.
    #[arg(long)]
    pub scan_k: Option<String>,

    /// Chain trainings per k; the lowest quantization error wins.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let (doc, cb) = load_codebook(run, &args.codebook)?;
    let orientation = match &args.orient_var {
        Some(v) => match doc.codes.iter().position(|c| c == v) {
            Some(i) => Some(i),
            None => bail!("--orient-var `{v}` is not a map variable"),
        },
        None => {
            let found = doc.codes.iter().position(|c| c == DEFAULT_ORIENTATION);
            if found.is_none() {
                eprintln!("note: no {DEFAULT_ORIENTATION} variable; super-class order follows the chain as trained");
            }
            found
        }
    };
    let seed = run.seed();
    run.record_seed("chain", seed);
    let options = |k: usize| {
        let mut o = ReductionOptions::new(k, seed);
        o.orientation = orientation;
        o.restarts = args.restarts;
        o
    };
    run.record("chain_schedule", &options(args.k).schedule)?;
    run.record("restarts", &args.restarts)?;

    let groups = reduce_superclasses(&cb, &options(args.k))?;
    let main = main_map(run, args.main_map.as_deref(), &groups)?;
    run.write_json("superclasses.json", &groups)?;
    run.write_json("mainclasses.json", &main)?;

    if let Some(range) = &args.scan_k {
        let mut table = String::from("k,quantization_error,empty_classes\n");
        for k in parse_int_list(range)? {
            if k < 2 || k as usize > cb.unit_count() {
                bail!("--scan-k values must lie in 2..={}", cb.unit_count());
            }
            let g = reduce_superclasses(&cb, &options(k as usize))?;
            table.push_str(&format!("{k},{},{}\n", g.quantization_error, g.empty.len()));
        }
        run.write("k-scan.csv", table.as_bytes())?;
    }

    let sizes = groups.sizes_in_units();
    println!("{} super-classes, units per class: {sizes:?}", groups.k);
    for (name, members) in main.labels().iter().map(|l| {
        let m: Vec<String> = (1..=groups.k).filter(|&s| main.get(s) == Some(l.as_str())).map(|s| s.to_string()).collect();
        (l, m)
    }) {
        println!("  {name} = {{{}}}", members.join(","));
    }
    if !groups.empty.is_empty() {
        eprintln!("note: super-classes without units: {:?}", groups.empty.iter().map(|e| e + 1).collect::<Vec<_>>());
    }
    Ok(())
}
