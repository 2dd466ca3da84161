//! Two-stage outlier detection.
//!
//! Shape outliers are curves whose modified shape variation falls below the
//! lower fence of a classical boxplot of all MSV values. After removing them,
//! a functional boxplot on total variation depth flags the magnitude outliers:
//! any curve leaving the inflated central region at any grid point.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::data::FunctionalDataset;
use crate::depth::{DepthProfile, WeightChoice};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// IQR multiplier for the lower MSV fence.
    pub shape_factor: f64,
    /// Inflation factor of the central region.
    pub magnitude_factor: f64,
    /// Fraction of the original sample forming the central region.
    pub central_proportion: f64,
    pub weight_choice: WeightChoice,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            shape_factor: 3.0,
            magnitude_factor: 1.5,
            central_proportion: 0.5,
            weight_choice: WeightChoice::Sd,
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shape_factor.is_nan() || self.shape_factor <= 0.0 {
            return Err(Error::InvalidData(format!(
                "shape factor must be positive, got {}",
                self.shape_factor
            )));
        }
        if self.magnitude_factor.is_nan() || self.magnitude_factor <= 0.0 {
            return Err(Error::InvalidData(format!(
                "magnitude factor must be positive, got {}",
                self.magnitude_factor
            )));
        }
        if !(self.central_proportion > 0.0 && self.central_proportion <= 1.0) {
            return Err(Error::InvalidData(format!(
                "central proportion must lie in (0, 1], got {}",
                self.central_proportion
            )));
        }
        Ok(())
    }

    /// Size of the central region for a sample of `n` curves.
    pub fn keep_count(&self, n: usize) -> usize {
        ((self.central_proportion * n as f64).ceil() as usize).clamp(1, n.max(1))
    }
}

/// Pointwise lower and upper bounds over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Envelope {
    /// Pointwise min/max of the given curves; `None` if `curves` is empty.
    pub fn of_curves(ds: &FunctionalDataset, curves: &[usize]) -> Option<Self> {
        let (&first, rest) = curves.split_first()?;
        let mut lower = ds.row(first).to_vec();
        let mut upper = lower.clone();
        for &j in rest {
            for ((lo, hi), &x) in lower.iter_mut().zip(upper.iter_mut()).zip(ds.row(j)) {
                *lo = lo.min(x);
                *hi = hi.max(x);
            }
        }
        Some(Self { lower, upper })
    }

    /// The envelope widened on each side by `factor` times its width.
    pub fn inflate(&self, factor: f64) -> Self {
        let (lower, upper) = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| {
                let width = hi - lo;
                (lo - factor * width, hi + factor * width)
            })
            .unzip();
        Self { lower, upper }
    }

    pub fn contains(&self, curve: &[f64]) -> bool {
        curve
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&x, (&lo, &hi))| lo <= x && x <= hi)
    }
}

/// Box statistics of the MSV values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsvBoxplot {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
}

/// Linear-interpolation quantile of sorted data: position `q (n - 1)`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Curves with MSV strictly below `Q1 - factor * IQR`.
pub fn shape_outliers(msv: &[f64], factor: f64) -> Result<(Vec<usize>, MsvBoxplot)> {
    if msv.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: msv.len(),
        });
    }
    let mut sorted = msv.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - factor * iqr;
    let flagged = msv
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < lower_fence)
        .map(|(j, _)| j)
        .collect();
    Ok((
        flagged,
        MsvBoxplot {
            q1,
            q3,
            iqr,
            lower_fence,
        },
    ))
}

/// The deepest curves and their envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralRegion {
    pub envelope: Envelope,
    /// Member curves, deepest first.
    pub members: Vec<usize>,
}

/// Non-excluded curve indices ordered by depth, deepest first, ties by index.
pub fn depth_order(depths: &[f64], excluded: &BTreeSet<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..depths.len())
        .filter(|j| !excluded.contains(j))
        .collect();
    order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
    order
}

/// Envelope of the `keep_count` deepest non-excluded curves (or of all of them
/// if fewer remain).
pub fn central_region(
    ds: &FunctionalDataset,
    depths: &[f64],
    keep_count: usize,
    excluded: &BTreeSet<usize>,
) -> Result<CentralRegion> {
    if depths.len() != ds.n() {
        return Err(Error::InvalidData(format!(
            "{} depth values for {} curves",
            depths.len(),
            ds.n()
        )));
    }
    if keep_count == 0 {
        return Err(Error::InvalidData("central region needs keep_count >= 1".into()));
    }
    let mut members = depth_order(depths, excluded);
    members.truncate(keep_count);
    let envelope = Envelope::of_curves(ds, &members).ok_or(Error::EmptySelection)?;
    Ok(CentralRegion { envelope, members })
}

/// Non-excluded curves leaving the fences at any grid point, plus the fences.
pub fn magnitude_outliers(
    ds: &FunctionalDataset,
    region: &Envelope,
    factor: f64,
    excluded: &BTreeSet<usize>,
) -> Result<(Vec<usize>, Envelope)> {
    if region.lower.len() != ds.m() || region.upper.len() != ds.m() {
        return Err(Error::Alignment {
            expected: ds.m(),
            found: region.lower.len().min(region.upper.len()),
        });
    }
    let fences = region.inflate(factor);
    let flagged = (0..ds.n())
        .filter(|j| !excluded.contains(j) && !fences.contains(ds.row(*j)))
        .collect();
    Ok((flagged, fences))
}

/// Result of the two-stage procedure. Curve indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub shape_outliers: Vec<usize>,
    pub magnitude_outliers: Vec<usize>,
    /// Deepest curve among the non-shape-outliers.
    pub median_index: usize,
    pub central_region: Envelope,
    pub central_members: Vec<usize>,
    pub fences: Envelope,
    pub depths: DepthProfile,
    pub msv_boxplot: MsvBoxplot,
}

impl OutlierReport {
    /// Union of shape and magnitude outliers, sorted.
    pub fn all_outliers(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .shape_outliers
            .iter()
            .chain(&self.magnitude_outliers)
            .copied()
            .collect();
        set.into_iter().collect()
    }
}

pub fn detect(ds: &FunctionalDataset, cfg: &DetectionConfig) -> Result<OutlierReport> {
    cfg.validate()?;
    if ds.n() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: ds.n(),
        });
    }
    let depths = DepthProfile::compute(ds, cfg.weight_choice)?;
    detect_with_depths(ds, depths, cfg)
}

/// Steps two and three of the procedure on precomputed depths.
pub fn detect_with_depths(
    ds: &FunctionalDataset,
    depths: DepthProfile,
    cfg: &DetectionConfig,
) -> Result<OutlierReport> {
    let (shape, msv_boxplot) = shape_outliers(&depths.msv, cfg.shape_factor)?;
    let excluded: BTreeSet<usize> = shape.iter().copied().collect();
    let region = central_region(ds, &depths.tvd, cfg.keep_count(ds.n()), &excluded)?;
    let (magnitude, fences) =
        magnitude_outliers(ds, &region.envelope, cfg.magnitude_factor, &excluded)?;
    Ok(OutlierReport {
        shape_outliers: shape,
        magnitude_outliers: magnitude,
        median_index: region.members[0],
        central_region: region.envelope,
        central_members: region.members,
        fences,
        depths,
        msv_boxplot,
    })
}

/// Everything needed to draw the shape outlyingness plot and the functional
/// boxplot of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotGeometry {
    pub grid: Vec<f64>,
    pub median_index: usize,
    pub median_curve: Vec<f64>,
    pub central_region: Envelope,
    pub fences: Envelope,
    /// Pointwise min/max over the curves that are not outliers.
    pub envelope: Envelope,
    pub shape_outliers: Vec<usize>,
    pub magnitude_outliers: Vec<usize>,
    pub msv: Vec<f64>,
    pub msv_boxplot: MsvBoxplot,
}

pub fn boxplot_geometry(ds: &FunctionalDataset, report: &OutlierReport) -> BoxplotGeometry {
    let outlying: BTreeSet<usize> = report.all_outliers().into_iter().collect();
    let inliers: Vec<usize> = (0..ds.n()).filter(|j| !outlying.contains(j)).collect();
    // The median curve is never an outlier, so `inliers` is never empty for a
    // report produced from `ds`.
    let envelope = Envelope::of_curves(ds, &inliers)
        .unwrap_or_else(|| Envelope::of_curves(ds, &[report.median_index]).expect("median"));
    BoxplotGeometry {
        grid: ds.grid().points().to_vec(),
        median_index: report.median_index,
        median_curve: ds.row(report.median_index).to_vec(),
        central_region: report.central_region.clone(),
        fences: report.fences.clone(),
        envelope,
        shape_outliers: report.shape_outliers.clone(),
        magnitude_outliers: report.magnitude_outliers.clone(),
        msv: report.depths.msv.clone(),
        msv_boxplot: report.msv_boxplot,
    }
}
