//! Zero-mean Gaussian process draws on a grid via a Cholesky factor.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};

/// Added to the covariance diagonal before factorization.
pub const CHOLESKY_JITTER: f64 = 1e-10;

/// `c(s, t) = variance * exp(-|s - t|^exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerExponential {
    pub variance: f64,
    pub exponent: f64,
}

impl PowerExponential {
    pub const fn new(variance: f64, exponent: f64) -> Self {
        Self { variance, exponent }
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.variance * (-(s - t).abs().powf(self.exponent)).exp()
    }
}

pub fn covariance_matrix(cov: impl Fn(f64, f64) -> f64, grid: &Grid) -> DMatrix<f64> {
    let t = grid.points();
    DMatrix::from_fn(t.len(), t.len(), |i, j| cov(t[i], t[j]))
}

/// Holds the lower-triangular factor `L` with `L L^T = C + jitter I`.
#[derive(Debug, Clone)]
pub struct GpSampler {
    /// Row-major lower triangle.
    factor: Vec<f64>,
    m: usize,
}

impl GpSampler {
    pub fn new(cov: impl Fn(f64, f64) -> f64, grid: &Grid) -> Result<Self> {
        let mut c = covariance_matrix(cov, grid);
        let m = grid.len();
        for i in 0..m {
            for j in 0..i {
                if (c[(i, j)] - c[(j, i)]).abs() > 1e-12 * c[(i, j)].abs().max(1.0) {
                    return Err(Error::Numerical(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
            c[(i, i)] += CHOLESKY_JITTER;
        }
        let chol = c.cholesky().ok_or_else(|| {
            Error::Numerical("covariance matrix is not positive definite".into())
        })?;
        let l = chol.l();
        let mut factor = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..=i {
                factor[i * m + j] = l[(i, j)];
            }
        }
        Ok(Self { factor, m })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// `L z` for a given standard-normal vector `z`.
    pub fn transform(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.m);
        (0..self.m)
            .map(|i| {
                self.factor[i * self.m..i * self.m + i + 1]
                    .iter()
                    .zip(z)
                    .map(|(l, z)| l * z)
                    .sum()
            })
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z = standard_normals(rng, self.m);
        self.transform(&z)
    }
}

pub(crate) fn standard_normals<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n` independent draws, one per row.
pub fn gp_sample<R: Rng + ?Sized>(
    cov: impl Fn(f64, f64) -> f64,
    grid: &Grid,
    n: usize,
    rng: &mut R,
) -> Result<FunctionalDataset> {
    let sampler = GpSampler::new(cov, grid)?;
    let values = (0..n).flat_map(|_| sampler.sample(rng)).collect();
    FunctionalDataset::new(grid.clone(), values, n)
}
