use std::path::PathBuf;

use anyhow::Result;
use segmap::panel::pool_years;
use segmap::pca::{correlation_pca, variable_projection, write_projection_csv};

use super::{load, parse_axes, parse_years, select_variables};
use crate::run::Run;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long)]
    pub years: Option<String>,

    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,

    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,

    /// 1-based component pairs for variable projections, e.g. `1,2`;
    /// repeatable.
    #[arg(long, default_value = "1,2")]
    pub axes: Vec<String>,
}

pub fn run(run: &mut Run, args: &Args) -> Result<()> {
    let panel = load(run, &args.input, &args.categorical)?;
    let years = parse_years(args.years.as_deref(), &panel)?;
    let codes = select_variables(&panel, &args.vars)?;
    let (pooled, _) = pool_years(&panel, &years, &codes)?.drop_empty_rows();
    let result = correlation_pca(&pooled)?;
    if result.repaired {
        eprintln!("note: pairwise correlation matrix was not positive semidefinite and was repaired");
    }
    run.write_json("pca.json", &result)?;
    for axes in &args.axes {
        let (a, b) = parse_axes(axes)?;
        let points = variable_projection(&result, (a, b))?;
        run.write_with(&format!("projection-{}-{}.csv", a + 1, b + 1), |w| write_projection_csv(w, &points))?;
    }
    for (k, (v, c)) in result.eigenvalues.iter().zip(&result.explained).enumerate() {
        println!("component {:>2}: eigenvalue {v:.4}, cumulative share {c:.4}", k + 1);
    }
    Ok(())
}
