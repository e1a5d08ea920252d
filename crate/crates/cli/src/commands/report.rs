use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use segmap::grouping::{class_means, qualitative_frequencies, SuperClassMap};
use segmap::panel::pool_years;
use segmap::pca::{variable_projection, PcaResult};
use segmap::trajectory::{project_year, TrajectorySet};

use super::{load, load_codebook, parse_axes};
use crate::run::Run;
use crate::svg;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub codebook: PathBuf,

    /// Super-class map; adds the partition, size and class-profile figures.
    #[arg(long)]
    pub groups: Option<PathBuf>,

    /// Unit-level trajectory CSV for the trajectory overlay.
    #[arg(long)]
    pub trajectories: Option<PathBuf>,

    /// Individuals to draw on the overlay; the first three by default.
    #[arg(long, value_delimiter = ',')]
    pub individual: Vec<String>,

    /// Panel CSV; with --groups, adds super-class means and frequency tables.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Categorical columns of --input to tabulate by super-class.
    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,

    /// PCA result from `pca`.
    #[arg(long)]
    pub pca: Option<PathBuf>,

    #[arg(long, default_value = "1,2")]
    pub axes: Vec<String>,

    /// Colour palette for the partition instead of gray tones.
    #[arg(long)]
    pub color: bool,
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let (doc, cb) = load_codebook(run, &args.codebook)?;
    let groups: Option<SuperClassMap> = args.groups.as_ref().map(|p| run.read_json(p)).transpose()?;
    if let Some(g) = &groups {
        if g.unit_to_super.len() != cb.unit_count() {
            bail!("super-class map covers {} units, codebook has {}", g.unit_to_super.len(), cb.unit_count());
        }
    }
    let shading = groups.as_ref().map(|g| (g.unit_to_super.as_slice(), g.k));
    let mut written = Vec::new();

    let profiles = svg::profiles(&cb, &doc.codes, shading);
    written.push(run.write("profiles.svg", profiles.as_bytes())?);

    // record counts per super-class, from the panel when given
    let mut record_sizes: Option<Vec<f64>> = None;
    if let (Some(g), Some(input)) = (&groups, &args.input) {
        let params = doc.standardization.as_ref().context("codebook carries no standardization parameters")?;
        let panel = load(run, input, &args.categorical)?;
        let (pooled, _) = pool_years(&panel, panel.years(), &doc.codes)?.drop_empty_rows();
        let labels = pooled
            .rows()
            .map(|r| project_year(params, &cb, r.values, r.missing).map(|u| g.unit_to_super[u]))
            .collect::<segmap::Result<Vec<_>>>()?;
        let classes = g.labels();
        let means = class_means(&pooled, &labels, &classes)?;
        written.push(run.write_with("class-means.csv", |w| means.write_csv(w))?);
        let origins = pooled.origins().context("pooled rows carry provenance")?;
        for attr in &args.categorical {
            let table = qualitative_frequencies(&panel, attr, origins, &labels, &classes)?;
            written.push(run.write_with(&format!("frequencies-{attr}.csv"), |w| table.write_csv(w))?);
        }
        record_sizes = Some(means.sizes.iter().map(|&s| s as f64).collect());
    }

    if let Some(g) = &groups {
        written.push(run.write("partition.svg", svg::partition(cb.topology(), &g.unit_to_super, g.k, args.color).as_bytes())?);
        let labels: Vec<String> = g.labels();
        let (title, sizes) = match record_sizes {
            Some(s) => ("Records per super-class", s),
            None => ("Map units per super-class", g.sizes_in_units().iter().map(|&s| s as f64).collect()),
        };
        written.push(run.write("superclass-sizes.svg", svg::bars(title, &labels, &sizes).as_bytes())?);
        let curves: Vec<(String, Vec<f64>)> =
            g.chain_codebook.vectors().enumerate().map(|(s, v)| (format!("class {}", s + 1), v.to_vec())).collect();
        let figure = svg::class_curves("Super-class profiles (standardized)", &doc.codes, &curves);
        written.push(run.write("superclass-profiles.svg", figure.as_bytes())?);
    }

    if let Some(path) = &args.trajectories {
        let bytes = run.read(path)?;
        let names: Vec<String> = (1..=cb.unit_count()).map(|u| u.to_string()).collect();
        let traj = TrajectorySet::read_csv(bytes.as_slice(), Some(names))
            .with_context(|| format!("`{}` must hold unit-level trajectories", path.display()))?;
        let chosen: Vec<usize> = if args.individual.is_empty() {
            (0..traj.len().min(3)).collect()
        } else {
            args.individual
                .iter()
                .map(|id| {
                    traj.individual_ids().iter().position(|x| x == id).with_context(|| format!("individual `{id}` not found"))
                })
                .collect::<Result<_>>()?
        };
        let paths: Vec<(String, Vec<usize>)> =
            chosen.iter().map(|&i| (traj.individual_ids()[i].clone(), traj.sequence(i).to_vec())).collect();
        written.push(run.write("trajectories.svg", svg::trajectories(cb.topology(), shading, &paths).as_bytes())?);
    }

    if let Some(path) = &args.pca {
        let result: PcaResult = run.read_json(path)?;
        for axes in &args.axes {
            let (a, b) = parse_axes(axes)?;
            let points: Vec<(String, f64, f64)> =
                variable_projection(&result, (a, b))?.into_iter().map(|p| (p.code, p.x, p.y)).collect();
            let share = |k: usize| result.explained[k] - if k == 0 { 0.0 } else { result.explained[k - 1] };
            let la = format!("F{} ({:.1}%)", a + 1, 100.0 * share(a));
            let lb = format!("F{} ({:.1}%)", b + 1, 100.0 * share(b));
            let name = format!("pca-{}-{}.svg", a + 1, b + 1);
            written.push(run.write(&name, svg::projection(&points, (&la, &lb)).as_bytes())?);
        }
    }

    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(())
}
