//! Pointwise and functional total variation depth.
//!
//! At grid point `t_i` the depth of a query value is the variance of the
//! indicator `1{X(t_i) <= f(t_i)}` under the empirical distribution of the
//! sample, `p(1 - p)`. The functional depth is a weighted sum of the pointwise
//! depths over the grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};
use crate::shape;

/// Tolerance on the sum of a weight vector.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Nonnegative weights over grid points (or adjacent grid pairs) summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidData("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidData(format!("weight {w} is not a finite nonnegative value")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidData(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    /// `len` equal weights of `1 / len`.
    pub fn uniform(len: usize) -> Self {
        let len = len.max(1);
        Self(vec![1.0 / len as f64; len])
    }

    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        Self(weights)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// How the grid-point weights of the functional depth are chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WeightChoice {
    /// Proportional to the sample standard deviation at each grid point.
    #[default]
    Sd,
    /// Constant weight `1/m`.
    Uniform,
}

impl WeightChoice {
    pub fn weights(self, ds: &FunctionalDataset) -> Result<WeightVector> {
        match self {
            WeightChoice::Sd => weight_sd(ds),
            WeightChoice::Uniform => Ok(weight_uniform(ds.grid())),
        }
    }
}

/// Per grid point, the number of curves with `X_j(t_i) <= f(t_i)`.
pub fn pointwise_counts(ds: &FunctionalDataset, f: &[f64]) -> Result<Vec<usize>> {
    ds.check_aligned(f)?;
    let mut counts = vec![0usize; ds.m()];
    for row in ds.rows() {
        for ((c, &x), &q) in counts.iter_mut().zip(row).zip(f) {
            *c += usize::from(x <= q);
        }
    }
    Ok(counts)
}

/// `p(t_i) = #{j : X_j(t_i) <= f(t_i)} / n`.
///
/// A query that is itself a row of `ds` counts itself.
pub fn pointwise_rank_proportions(ds: &FunctionalDataset, f: &[f64]) -> Result<Vec<f64>> {
    let n = ds.n() as f64;
    Ok(pointwise_counts(ds, f)?
        .into_iter()
        .map(|c| c as f64 / n)
        .collect())
}

/// `D(t_i) = p(t_i) (1 - p(t_i))`.
pub fn pointwise_depth(proportions: &[f64]) -> Result<Vec<f64>> {
    proportions
        .iter()
        .map(|&p| {
            if (0.0..=1.0).contains(&p) {
                Ok(p * (1.0 - p))
            } else {
                Err(Error::Domain { value: p })
            }
        })
        .collect()
}

/// `k (n - k) / n^2`, symmetric in `k <-> n - k` to the last bit.
#[inline]
pub(crate) fn depth_from_count(count: usize, n: usize) -> f64 {
    (count * (n - count)) as f64 / (n * n) as f64
}

/// Sample standard deviation at each grid point, normalized to sum to one.
pub fn weight_sd(ds: &FunctionalDataset) -> Result<WeightVector> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, found: n });
    }
    let sds: Vec<f64> = (0..ds.m())
        .map(|i| {
            let mean = ds.column(i).sum::<f64>() / n as f64;
            let ss: f64 = ds.column(i).map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        })
        .collect();
    let total: f64 = sds.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::DegenerateWeights);
    }
    Ok(WeightVector(sds.into_iter().map(|s| s / total).collect()))
}

pub fn weight_uniform(grid: &Grid) -> WeightVector {
    WeightVector::uniform(grid.len())
}

/// Total variation depth of `f` with respect to `ds`.
pub fn tvd(ds: &FunctionalDataset, f: &[f64], w: &WeightVector) -> Result<f64> {
    if w.len() != ds.m() {
        return Err(Error::Alignment {
            expected: ds.m(),
            found: w.len(),
        });
    }
    let n = ds.n();
    let counts = pointwise_counts(ds, f)?;
    Ok(counts
        .into_iter()
        .zip(w.as_slice())
        .map(|(c, &wi)| wi * depth_from_count(c, n))
        .sum())
}

/// Depth of every sample curve against the full sample (self-inclusive).
pub fn tvd_all(ds: &FunctionalDataset, choice: WeightChoice) -> Result<Vec<f64>> {
    let w = choice.weights(ds)?;
    tvd_all_with(ds, &w)
}

pub fn tvd_all_with(ds: &FunctionalDataset, w: &WeightVector) -> Result<Vec<f64>> {
    (0..ds.n())
        .into_par_iter()
        .map(|j| tvd(ds, ds.row(j), w))
        .collect()
}

/// Per-column sample median; the mean of the two middle values for even `n`.
pub fn pointwise_median(ds: &FunctionalDataset) -> Vec<f64> {
    let n = ds.n();
    let mut col = Vec::with_capacity(n);
    (0..ds.m())
        .map(|i| {
            col.clear();
            col.extend(ds.column(i));
            col.sort_unstable_by(f64::total_cmp);
            if n % 2 == 1 {
                col[n / 2]
            } else {
                0.5 * (col[n / 2 - 1] + col[n / 2])
            }
        })
        .collect()
}

/// Pointwise quantities behind one curve's depth values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseDiagnostics {
    /// Rank proportions, length `m`.
    pub proportions: Vec<f64>,
    /// Pointwise depth, length `m`.
    pub depth: Vec<f64>,
    /// Shape ratio of the median-shifted pairs, length `m - 1`.
    pub shape_ratio: Vec<f64>,
}

/// TVD and MSV for every curve of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthProfile {
    pub tvd: Vec<f64>,
    pub msv: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Vec<PointwiseDiagnostics>>,
}

impl DepthProfile {
    pub fn compute(ds: &FunctionalDataset, choice: WeightChoice) -> Result<Self> {
        let w = choice.weights(ds)?;
        Self::compute_with(ds, &w, false)
    }

    pub fn compute_with(
        ds: &FunctionalDataset,
        w: &WeightVector,
        with_diagnostics: bool,
    ) -> Result<Self> {
        let tvd = tvd_all_with(ds, w)?;
        let median = pointwise_median(ds);
        let shapes: Vec<shape::ShapeProfile> = (0..ds.n())
            .into_par_iter()
            .map(|j| shape::msv_profile(ds, ds.row(j), &median))
            .collect::<Result<_>>()?;
        let msv = shapes.iter().map(|s| s.msv).collect();
        let diagnostics = if with_diagnostics {
            Some(
                ds.rows()
                    .zip(shapes)
                    .map(|(row, s)| {
                        let proportions = pointwise_rank_proportions(ds, row)?;
                        let depth = pointwise_depth(&proportions)?;
                        Ok(PointwiseDiagnostics {
                            proportions,
                            depth,
                            shape_ratio: s.s_pointwise,
                        })
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        Ok(Self {
            tvd,
            msv,
            diagnostics,
        })
    }
}
