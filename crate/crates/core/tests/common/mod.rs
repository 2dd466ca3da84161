//! Test oracles computed by direct enumeration, independent of the library's
//! counting code paths.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tvdepth::{FunctionalDataset, Grid};

/// Indicator variance at grid point `i` by the textbook formula
/// `E[R^2] - E[R]^2` over the empirical distribution.
pub fn brute_pointwise_depth(rows: &[Vec<f64>], f: &[f64], i: usize) -> f64 {
    let n = rows.len() as f64;
    let r: Vec<f64> = rows
        .iter()
        .map(|x| if x[i] <= f[i] { 1.0 } else { 0.0 })
        .collect();
    let mean = r.iter().sum::<f64>() / n;
    r.iter().map(|v| v * v).sum::<f64>() / n - mean * mean
}

pub fn brute_tvd(rows: &[Vec<f64>], f: &[f64], w: &[f64]) -> f64 {
    (0..f.len())
        .map(|i| w[i] * brute_pointwise_depth(rows, f, i))
        .sum()
}

/// Splits the indicator at `i` by the indicator at `i - 1` into
/// `(variance of group means, mean of group variances)`, grouping rows
/// explicitly.
pub fn brute_total_variance_split(rows: &[Vec<f64>], prev: f64, cur: f64, i: usize) -> (f64, f64) {
    let n = rows.len() as f64;
    let r_cur: Vec<f64> = rows
        .iter()
        .map(|x| if x[i] <= cur { 1.0 } else { 0.0 })
        .collect();
    let overall = r_cur.iter().sum::<f64>() / n;
    let mut explained = 0.0;
    let mut unexplained = 0.0;
    for group in [true, false] {
        let members: Vec<f64> = rows
            .iter()
            .zip(&r_cur)
            .filter(|(x, _)| (x[i - 1] <= prev) == group)
            .map(|(_, &r)| r)
            .collect();
        if members.is_empty() {
            continue;
        }
        let size = members.len() as f64;
        let gmean = members.iter().sum::<f64>() / size;
        let gvar = members.iter().map(|r| (r - gmean).powi(2)).sum::<f64>() / size;
        explained += size / n * (gmean - overall).powi(2);
        unexplained += size / n * gvar;
    }
    (explained, unexplained)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(x: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
        let mut r = vec![0.0; x.len()];
        let mut k = 0;
        while k < idx.len() {
            let mut e = k;
            while e + 1 < idx.len() && x[idx[e + 1]] == x[idx[k]] {
                e += 1;
            }
            let avg = (k + e) as f64 / 2.0 + 1.0;
            for &i in &idx[k..=e] {
                r[i] = avg;
            }
            k = e + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Matrix of standard-normal values, tie-free with probability one.
pub fn normal_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..m).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

/// Small integers, so that ties are frequent.
pub fn tied_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(0..5) as f64).collect())
        .collect()
}

pub fn dataset(rows: Vec<Vec<f64>>) -> FunctionalDataset {
    let m = rows[0].len();
    FunctionalDataset::from_rows(Grid::indices(m).unwrap(), rows).unwrap()
}

pub fn rows_of(ds: &FunctionalDataset) -> Vec<Vec<f64>> {
    ds.rows().map(<[f64]>::to_vec).collect()
}

pub fn fix_a() -> FunctionalDataset {
    dataset(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]])
}

pub fn fix_b() -> FunctionalDataset {
    dataset(vec![
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        vec![2.0, 2.0],
        vec![3.0, 3.0],
    ])
}
