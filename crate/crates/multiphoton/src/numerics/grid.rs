//! Uniform sampling grids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid needs x_max > x_min, got [{0}, {1}]")]
    EmptyInterval(f64, f64),
}

/// A uniform grid of `n_points` samples on `[x_min, x_max]`, endpoints
/// included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self, GridError> {
        if n_points < 2 {
            return Err(GridError::TooFewPoints(n_points));
        }
        if !(x_max > x_min) {
            return Err(GridError::EmptyInterval(x_min, x_max));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }

    /// Symmetric grid widened to an odd-ish point count near `dx_target`.
    pub fn spanning(x_min: f64, x_max: f64, dx_target: f64) -> Self {
        let n = ((x_max - x_min) / dx_target).ceil() as usize + 1;
        Grid { x_min, x_max, n_points: n.max(2) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 8).is_err());
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.point(4), 1.0);
    }
}
