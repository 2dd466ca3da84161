//! Observation grid and the sample of curves observed on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing, finite observation points `t_1 < ... < t_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid(format!("point {i} is not finite")));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!(
                "points {} and {} are not strictly increasing ({} >= {})",
                i,
                i + 1,
                points[i],
                points[i + 1]
            )));
        }
        Ok(Self { points })
    }

    /// `m` equally spaced points on `[0, 1]`, endpoints included.
    pub fn unit_interval(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {m}"
            )));
        }
        let step = (m - 1) as f64;
        Self::new((0..m).map(|i| i as f64 / step).collect())
    }

    /// The integer indices `0, 1, ..., m-1`.
    pub fn indices(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| i as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps every `stride`-th point, starting with the first.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        Self::new(self.points.iter().copied().step_by(stride.max(1)).collect())
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(grid: Grid) -> Self {
        grid.points
    }
}

/// `n` curves on a shared grid, stored row-major (one row per curve).
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDataset {
    grid: Grid,
    values: Vec<f64>,
    n: usize,
}

impl FunctionalDataset {
    pub fn new(grid: Grid, values: Vec<f64>, n: usize) -> Result<Self> {
        let m = grid.len();
        if n == 0 {
            return Err(Error::InsufficientData {
                needed: 1,
                found: 0,
            });
        }
        if values.len() != n * m {
            return Err(Error::InvalidData(format!(
                "expected {n} x {m} = {} values, got {}",
                n * m,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "curve {} at grid point {} is not finite",
                k / m,
                k % m
            )));
        }
        Ok(Self { grid, values, n })
    }

    pub fn from_rows(grid: Grid, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = grid.len();
        let n = rows.len();
        if let Some(j) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::InvalidData(format!(
                "curve {j} has {} values, grid has {m}",
                rows[j].len()
            )));
        }
        Self::new(grid, rows.into_iter().flatten().collect(), n)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of curves.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points.
    pub fn m(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn value(&self, curve: usize, point: usize) -> f64 {
        self.values[curve * self.m() + point]
    }

    pub fn row(&self, curve: usize) -> &[f64] {
        let m = self.m();
        &self.values[curve * m..(curve + 1) * m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.m())
    }

    pub fn column(&self, point: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.values
            .iter()
            .skip(point)
            .step_by(self.m())
            .copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Keeps every `stride`-th grid point in both the grid and every curve.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride <= 1 {
            return Ok(self.clone());
        }
        let grid = self.grid.subsample(stride)?;
        let values = self
            .rows()
            .flat_map(|r| r.iter().copied().step_by(stride))
            .collect();
        Self::new(grid, values, self.n)
    }

    /// The dataset restricted to the given curves, in the given order.
    pub fn select(&self, curves: &[usize]) -> Result<Self> {
        let values = curves
            .iter()
            .flat_map(|&j| self.row(j).iter().copied())
            .collect();
        Self::new(self.grid.clone(), values, curves.len())
    }

    pub(crate) fn check_aligned(&self, query: &[f64]) -> Result<()> {
        if query.len() != self.m() {
            return Err(Error::Alignment {
                expected: self.m(),
                found: query.len(),
            });
        }
        Ok(())
    }
}
