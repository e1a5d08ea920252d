use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("duplicate record for individual `{individual}` in year {year} (line {line})")]
    Duplicate {
        individual: String,
        year: i32,
        line: u64,
    },

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("variable `{0}` is degenerate (constant or fewer than two observed values)")]
    DegenerateVariable(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unit index {index} out of range for {units} units")]
    Index { index: usize, units: usize },

    #[error("observation has no observed coordinate{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    EmptyObservation { context: Option<String> },

    #[error("no transitions between distinct labels")]
    UndefinedFrequencies,

    #[error("transition matrix is reducible")]
    Reducible,

    #[error("stationary distribution did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Numerical failures (as opposed to bad input) map to a distinct exit
    /// code in the command-line tool.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Reducible | Error::NonConvergence { .. } | Error::UndefinedFrequencies
        )
    }
}
