//! Modified band depth (bands of two curves), the baseline depth of the
//! classical functional boxplot.

use std::collections::BTreeSet;

use crate::data::FunctionalDataset;
use crate::error::{Error, Result};
use crate::outliers::{central_region, magnitude_outliers, DetectionConfig};

/// For each curve, the average over grid points of the fraction of curve
/// pairs whose pointwise band `[min, max]` contains the curve's value.
///
/// A pair misses a value exactly when both members lie strictly below it or
/// both strictly above it, so each grid point costs one sort plus a binary
/// search per curve.
pub fn mbd(ds: &FunctionalDataset) -> Result<Vec<f64>> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, found: n });
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let choose2 = |k: usize| (k * k.saturating_sub(1) / 2) as f64;
    let mut totals = vec![0.0; n];
    let mut sorted = Vec::with_capacity(n);
    for i in 0..ds.m() {
        sorted.clear();
        sorted.extend(ds.column(i));
        sorted.sort_unstable_by(f64::total_cmp);
        for (j, total) in totals.iter_mut().enumerate() {
            let x = ds.value(j, i);
            let below = sorted.partition_point(|&v| v < x);
            let above = n - sorted.partition_point(|&v| v <= x);
            *total += (pairs - choose2(below) - choose2(above)) / pairs;
        }
    }
    let m = ds.m() as f64;
    Ok(totals.into_iter().map(|t| t / m).collect())
}

/// Functional boxplot on MBD alone: curves leaving the inflated central
/// region are flagged; there is no shape stage.
pub fn mbd_boxplot_outliers(ds: &FunctionalDataset, cfg: &DetectionConfig) -> Result<Vec<usize>> {
    let depths = mbd(ds)?;
    let none = BTreeSet::new();
    let region = central_region(ds, &depths, cfg.keep_count(ds.n()), &none)?;
    let (flagged, _) = magnitude_outliers(ds, &region.envelope, cfg.magnitude_factor, &none)?;
    Ok(flagged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Grid;

    /// Direct enumeration of all pairs.
    fn mbd_brute(ds: &FunctionalDataset) -> Vec<f64> {
        let n = ds.n();
        let pairs = (n * (n - 1) / 2) as f64;
        (0..n)
            .map(|j| {
                let mut acc = 0.0;
                for i in 0..ds.m() {
                    let x = ds.value(j, i);
                    let mut hits = 0usize;
                    for a in 0..n {
                        for b in a + 1..n {
                            let (lo, hi) = {
                                let (u, v) = (ds.value(a, i), ds.value(b, i));
                                (u.min(v), u.max(v))
                            };
                            hits += usize::from(lo <= x && x <= hi);
                        }
                    }
                    acc += hits as f64 / pairs;
                }
                acc / ds.m() as f64
            })
            .collect()
    }

    #[test]
    fn fix_a() {
        let ds = FunctionalDataset::from_rows(
            Grid::indices(2).unwrap(),
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]],
        )
        .unwrap();
        let d = mbd(&ds).unwrap();
        for (got, want) in d.iter().zip([2.0 / 3.0, 1.0, 2.0 / 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_curves_have_unit_depth() {
        let ds = FunctionalDataset::from_rows(
            Grid::indices(3).unwrap(),
            vec![vec![0.0, 5.0, 1.0], vec![2.0, -1.0, 1.0]],
        )
        .unwrap();
        assert_eq!(mbd(&ds).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn matches_brute_force_with_ties() {
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|j| (0..6).map(|i| ((j * 7 + i * 3) % 5) as f64).collect())
            .collect();
        let ds = FunctionalDataset::from_rows(Grid::indices(6).unwrap(), rows).unwrap();
        let fast = mbd(&ds).unwrap();
        let slow = mbd_brute(&ds);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn needs_two_curves() {
        let ds = FunctionalDataset::from_rows(Grid::indices(2).unwrap(), vec![vec![0.0, 1.0]])
            .unwrap();
        assert!(mbd(&ds).is_err());
    }
}
