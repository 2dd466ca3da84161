//! Shape/magnitude split of the pointwise depth and the shape variation of a
//! curve.
//!
//! For adjacent grid points `t_{i-1}, t_i` the indicator variance
//! `p(t_i)(1 - p(t_i))` splits, by the law of total variance conditioned on
//! the indicator at `t_{i-1}`, into a shape part (variance of the conditional
//! mean) and a magnitude part (mean of the conditional variance). The shape
//! ratio is the shape part over the total. Everything here is computed from
//! exact counts over the sample.

use serde::{Deserialize, Serialize};

use crate::data::FunctionalDataset;
use crate::depth::{pointwise_median, WeightVector};
use crate::error::{Error, Result};

/// Marginal and joint rank proportions for one adjacent pair of grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairProportions {
    /// `#{X(t_{i-1}) <= f(t_{i-1})} / n`
    pub p_prev: f64,
    /// `#{X(t_i) <= f(t_i)} / n`
    pub p_cur: f64,
    /// `#{X(t_i) <= f(t_i), X(t_{i-1}) <= f(t_{i-1})} / n`
    pub p_joint_below: f64,
    /// `#{X(t_i) <= f(t_i), X(t_{i-1}) > f(t_{i-1})} / n`
    pub p_joint_above: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairCounts {
    prev: usize,
    cur: usize,
    below: usize,
    above: usize,
}

impl PairCounts {
    fn proportions(self, n: usize) -> PairProportions {
        let n = n as f64;
        PairProportions {
            p_prev: self.prev as f64 / n,
            p_cur: self.cur as f64 / n,
            p_joint_below: self.below as f64 / n,
            p_joint_above: self.above as f64 / n,
        }
    }
}

fn pair_counts(ds: &FunctionalDataset, i: usize, prev_value: f64, cur_value: f64) -> PairCounts {
    let mut c = PairCounts {
        prev: 0,
        cur: 0,
        below: 0,
        above: 0,
    };
    for row in ds.rows() {
        let below_prev = row[i - 1] <= prev_value;
        let below_cur = row[i] <= cur_value;
        c.prev += usize::from(below_prev);
        c.cur += usize::from(below_cur);
        c.below += usize::from(below_cur && below_prev);
        c.above += usize::from(below_cur && !below_prev);
    }
    c
}

fn check_pair_index(ds: &FunctionalDataset, i: usize) -> Result<()> {
    if i == 0 || i >= ds.m() {
        return Err(Error::IndexOutOfRange {
            index: i,
            valid: format!("1..{}", ds.m()),
        });
    }
    Ok(())
}

/// Proportions for the pair `(t_{i-1}, t_i)`; `i` is a 0-based grid index in
/// `1..m`.
pub fn pair_proportions(ds: &FunctionalDataset, f: &[f64], i: usize) -> Result<PairProportions> {
    ds.check_aligned(f)?;
    check_pair_index(ds, i)?;
    Ok(pair_counts(ds, i, f[i - 1], f[i]).proportions(ds.n()))
}

/// `a / b`, with `0` when `b` is zero.
#[inline]
fn ratio_or_zero(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// Variance of the conditional mean: the part of `p_cur (1 - p_cur)`
/// explained by the indicator at the previous grid point.
pub fn shape_component(pp: &PairProportions) -> f64 {
    let total = pp.p_cur * (1.0 - pp.p_cur);
    let explained = ratio_or_zero(pp.p_joint_below * pp.p_joint_below, pp.p_prev)
        + ratio_or_zero(pp.p_joint_above * pp.p_joint_above, 1.0 - pp.p_prev)
        - pp.p_cur * pp.p_cur;
    explained.clamp(0.0, total)
}

/// Mean of the conditional variance: the part of `p_cur (1 - p_cur)` left
/// unexplained by the previous grid point.
pub fn magnitude_component(pp: &PairProportions) -> f64 {
    let total = pp.p_cur * (1.0 - pp.p_cur);
    let q_below = ratio_or_zero(pp.p_joint_below, pp.p_prev);
    let q_above = ratio_or_zero(pp.p_joint_above, 1.0 - pp.p_prev);
    let unexplained =
        pp.p_prev * q_below * (1.0 - q_below) + (1.0 - pp.p_prev) * q_above * (1.0 - q_above);
    unexplained.clamp(0.0, total)
}

/// Shape component over pointwise depth; `1` where the depth vanishes.
pub fn shape_ratio(pp: &PairProportions) -> f64 {
    if pp.p_cur <= 0.0 || pp.p_cur >= 1.0 {
        return 1.0;
    }
    let total = pp.p_cur * (1.0 - pp.p_cur);
    (shape_component(pp) / total).clamp(0.0, 1.0)
}

/// Absolute increments of `f`, normalized; uniform when `f` is constant.
pub fn weight_v(f: &[f64]) -> Result<WeightVector> {
    if f.len() < 2 {
        return Err(Error::InvalidData(format!(
            "increment weights need at least 2 values, got {}",
            f.len()
        )));
    }
    let increments: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let total: f64 = increments.iter().sum();
    if total > 0.0 && total.is_finite() {
        Ok(WeightVector::from_normalized(
            increments.into_iter().map(|d| d / total).collect(),
        ))
    } else {
        Ok(WeightVector::uniform(increments.len()))
    }
}

/// Shape quantities of one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeProfile {
    /// Shape ratio of the unshifted pairs, length `m - 1`.
    pub s_pointwise: Vec<f64>,
    /// Shape ratio of the median-shifted pairs, length `m - 1`.
    pub s_shifted: Vec<f64>,
    pub v_weights: WeightVector,
    pub sv: f64,
    pub msv: f64,
}

fn weighted_sum(weights: &WeightVector, values: &[f64]) -> f64 {
    weights
        .as_slice()
        .iter()
        .zip(values)
        .map(|(w, s)| w * s)
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// Shape variation of `f`.
pub fn sv(ds: &FunctionalDataset, f: &[f64]) -> Result<f64> {
    ds.check_aligned(f)?;
    let v = weight_v(f)?;
    let s: Vec<f64> = (1..ds.m())
        .map(|i| shape_ratio(&pair_counts(ds, i, f[i - 1], f[i]).proportions(ds.n())))
        .collect();
    Ok(weighted_sum(&v, &s))
}

/// Modified shape variation of `f`: each pair is shifted, increment
/// preserved, so that its second value sits on the pointwise median.
pub fn msv(ds: &FunctionalDataset, f: &[f64]) -> Result<f64> {
    let median = pointwise_median(ds);
    Ok(msv_profile(ds, f, &median)?.msv)
}

/// All shape quantities of `f`, given the precomputed pointwise median.
pub fn msv_profile(ds: &FunctionalDataset, f: &[f64], median: &[f64]) -> Result<ShapeProfile> {
    ds.check_aligned(f)?;
    ds.check_aligned(median)?;
    let n = ds.n();
    let v_weights = weight_v(f)?;
    let mut s_pointwise = Vec::with_capacity(ds.m() - 1);
    let mut s_shifted = Vec::with_capacity(ds.m() - 1);
    for i in 1..ds.m() {
        s_pointwise.push(shape_ratio(
            &pair_counts(ds, i, f[i - 1], f[i]).proportions(n),
        ));
        // the shifted current value is the median itself; using it directly
        // keeps comparisons against sample values exact
        let shift = f[i] - median[i];
        let prev = if shift == 0.0 { f[i - 1] } else { f[i - 1] - shift };
        s_shifted.push(shape_ratio(
            &pair_counts(ds, i, prev, median[i]).proportions(n),
        ));
    }
    Ok(ShapeProfile {
        sv: weighted_sum(&v_weights, &s_pointwise),
        msv: weighted_sum(&v_weights, &s_shifted),
        s_pointwise,
        s_shifted,
        v_weights,
    })
}
