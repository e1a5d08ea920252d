//! Markov-chain analysis of label trajectories.

mod counts;
mod distribution;
mod matrix;
mod simulate;
mod stationary;

pub use counts::{change_frequencies, count_transitions, ChangeFrequencies, TransitionCounts};
pub use distribution::{distribution_at_year, write_distribution_table, Distribution};
pub use matrix::{is_irreducible, transition_matrix, TransitionEstimate, TransitionMatrix};
pub use simulate::simulate_chain;
pub(crate) use simulate::draw;
pub use stationary::{stationary_distribution, Stationary, StationaryOptions};

use std::io::Write;

use crate::error::Result;

/// Square table with a label header row and a label in the first column.
pub(crate) fn write_square<W: Write, T: ToString>(out: W, alphabet: &[String], rows: &[Vec<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::new()];
    header.extend(alphabet.iter().cloned());
    w.write_record(&header)?;
    for (label, row) in alphabet.iter().zip(rows) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(ToString::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
