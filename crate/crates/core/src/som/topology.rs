use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arrangement of map units. Units are numbered row-major from the upper
/// left corner, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    Grid2d { rows: usize, cols: usize },
    Chain { length: usize },
}

impl Topology {
    pub fn grid2d(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::config(format!("grid dimensions must be positive, got {rows}x{cols}")));
        }
        Ok(Topology::Grid2d { rows, cols })
    }

    pub fn chain(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::config("chain length must be positive"));
        }
        Ok(Topology::Chain { length })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Topology::Grid2d { rows, cols } => Self::grid2d(rows, cols).map(drop),
            Topology::Chain { length } => Self::chain(length).map(drop),
        }
    }

    pub fn unit_count(&self) -> usize {
        match *self {
            Topology::Grid2d { rows, cols } => rows * cols,
            Topology::Chain { length } => length,
        }
    }

    /// Longest side of the map, the natural upper bound for a radius.
    pub fn extent(&self) -> usize {
        match *self {
            Topology::Grid2d { rows, cols } => rows.max(cols),
            Topology::Chain { length } => length,
        }
    }

    /// (row, column) of a unit; a chain is a single row.
    pub fn position(&self, unit: usize) -> (usize, usize) {
        match *self {
            Topology::Grid2d { cols, .. } => (unit / cols, unit % cols),
            Topology::Chain { .. } => (0, unit),
        }
    }

    fn check(&self, unit: usize) -> Result<()> {
        let units = self.unit_count();
        if unit >= units {
            return Err(Error::Index { index: unit, units });
        }
        Ok(())
    }

    /// Chebyshev distance on a grid, absolute offset on a chain.
    pub fn grid_distance(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn distance_unchecked(&self, a: usize, b: usize) -> usize {
        let (ra, ca) = self.position(a);
        let (rb, cb) = self.position(b);
        ra.abs_diff(rb).max(ca.abs_diff(cb))
    }

    /// Pairs of units at grid distance 1, each listed once.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.unit_count();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.distance_unchecked(a, b) == 1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Hard,
    Gaussian,
}

const RADIUS_FLOOR: f64 = 1e-9;

/// Neighborhood strength in [0, 1] at a given grid distance.
pub fn neighborhood_weight(kernel: Kernel, radius: f64, distance: usize) -> f64 {
    let d = distance as f64;
    match kernel {
        Kernel::Hard => {
            if d <= radius {
                1.0
            } else {
                0.0
            }
        }
        Kernel::Gaussian => {
            let r = radius.max(RADIUS_FLOOR);
            (-(d * d) / (2.0 * r * r)).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chebyshev_on_grid() {
        let t = Topology::grid2d(8, 8).unwrap();
        assert_eq!(t.grid_distance(0, 9).unwrap(), 1);
        assert_eq!(t.grid_distance(0, 63).unwrap(), 7);
        assert_eq!(t.grid_distance(7, 56).unwrap(), 7);
        assert_eq!(t.grid_distance(10, 10).unwrap(), 0);
    }

    #[test]
    fn chain_distance() {
        let t = Topology::chain(7).unwrap();
        assert_eq!(t.grid_distance(2, 6).unwrap(), 4);
        assert_eq!(t.grid_distance(3, 3).unwrap(), 0);
    }

    #[test]
    fn out_of_range_unit() {
        let t = Topology::grid2d(2, 3).unwrap();
        assert!(matches!(t.grid_distance(0, 6), Err(Error::Index { index: 6, units: 6 })));
        assert!(Topology::grid2d(0, 3).is_err());
        assert!(Topology::chain(0).is_err());
    }

    #[test]
    fn row_major_numbering() {
        let t = Topology::grid2d(8, 8).unwrap();
        assert_eq!(t.position(0), (0, 0));
        assert_eq!(t.position(7), (0, 7));
        assert_eq!(t.position(8), (1, 0));
        assert_eq!(t.position(63), (7, 7));
        assert_eq!(t.unit_count(), 64);
    }

    #[test]
    fn adjacency_counts() {
        // 3x3 grid with king moves: 12 orthogonal + 8 diagonal
        assert_eq!(Topology::grid2d(3, 3).unwrap().adjacent_pairs().len(), 20);
        assert_eq!(Topology::chain(5).unwrap().adjacent_pairs().len(), 4);
    }

    #[test]
    fn kernel_values() {
        assert_eq!(neighborhood_weight(Kernel::Hard, 0.0, 0), 1.0);
        assert_eq!(neighborhood_weight(Kernel::Gaussian, 0.0, 0), 1.0);
        assert_eq!(neighborhood_weight(Kernel::Hard, 1.0, 2), 0.0);
        assert_eq!(neighborhood_weight(Kernel::Hard, 1.0, 1), 1.0);
        let g = neighborhood_weight(Kernel::Gaussian, 1.0, 1);
        assert!((g - (-0.5f64).exp()).abs() < 1e-15);
        assert!((g - 0.6065).abs() < 1e-4);
        assert_eq!(neighborhood_weight(Kernel::Gaussian, 0.0, 1), 0.0);
    }

    proptest! {
        #[test]
        fn kernel_is_monotone(radius in 0.0f64..10.0, d in 0usize..20, gaussian in any::<bool>()) {
            let k = if gaussian { Kernel::Gaussian } else { Kernel::Hard };
            let (a, b) = (neighborhood_weight(k, radius, d), neighborhood_weight(k, radius, d + 1));
            prop_assert!(b <= a);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn grid_distance_is_symmetric(rows in 1usize..10, cols in 1usize..10, a in 0usize..100, b in 0usize..100) {
            let t = Topology::grid2d(rows, cols).unwrap();
            let n = t.unit_count();
            let (a, b) = (a % n, b % n);
            prop_assert_eq!(t.grid_distance(a, b).unwrap(), t.grid_distance(b, a).unwrap());
        }
    }
}
