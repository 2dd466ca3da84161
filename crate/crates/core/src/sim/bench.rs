//! Monte-Carlo TPR/FPR harness over the simulation models.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mbd::mbd_boxplot_outliers;
use super::models::{simulate, ModelId, ModelSpec, DEFAULT_CONTAMINATION};
use super::rng::derive_seed;
use crate::error::{Error, Result};
use crate::outliers::{detect, DetectionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// MSV boxplot for shape outliers, then the TVD functional boxplot.
    TvdMsv,
    /// Functional boxplot on modified band depth.
    MbdFbplot,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::TvdMsv, Method::MbdFbplot];

    pub fn name(self) -> &'static str {
        match self {
            Method::TvdMsv => "tvd_msv",
            Method::MbdFbplot => "mbd_fbplot",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tvd_msv" => Ok(Method::TvdMsv),
            "mbd_fbplot" => Ok(Method::MbdFbplot),
            other => Err(Error::InvalidData(format!("unknown method {other:?}"))),
        }
    }
}

/// True and false positive rates in percent. Either is `None` when its
/// denominator (true outliers, true inliers) is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
}

pub fn evaluate(detected: &[usize], truth: &[bool]) -> Result<Rates> {
    let detected: BTreeSet<usize> = detected.iter().copied().collect();
    if let Some(&j) = detected.iter().find(|&&j| j >= truth.len()) {
        return Err(Error::IndexOutOfRange {
            index: j,
            valid: format!("0..{}", truth.len()),
        });
    }
    let positives = truth.iter().filter(|&&t| t).count();
    let negatives = truth.len() - positives;
    let hits = detected.iter().filter(|&&j| truth[j]).count();
    let false_hits = detected.len() - hits;
    let pct = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    Ok(Rates {
        tpr: pct(hits, positives),
        fpr: pct(false_hits, negatives),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub models: Vec<ModelId>,
    pub reps: usize,
    pub base_seed: u64,
    pub n: usize,
    pub m: usize,
    pub contamination: f64,
    pub detection: DetectionConfig,
    pub methods: Vec<Method>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            models: ModelId::ALL.to_vec(),
            reps: 200,
            base_seed: 0,
            n: 100,
            m: 50,
            contamination: DEFAULT_CONTAMINATION,
            detection: DetectionConfig::default(),
            methods: Method::ALL.to_vec(),
        }
    }
}

impl BenchConfig {
    /// Simulation parameters of one repetition.
    pub fn rep_spec(&self, model: ModelId, rep: usize) -> ModelSpec {
        ModelSpec {
            model,
            n: self.n,
            m: self.m,
            contamination: self.contamination,
            seed: derive_seed(self.base_seed, &[u64::from(model.get()), rep as u64]),
        }
    }
}

/// Mean and sample sd of the defined per-repetition values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    /// Repetitions where the rate was defined.
    pub count: usize,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let xs: Vec<f64> = values.into_iter().flatten().collect();
        let count = xs.len();
        if count == 0 {
            return Self {
                mean: None,
                sd: None,
                count,
            };
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean: Some(mean),
            sd: Some(sd),
            count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: ModelId,
    pub method: Method,
    pub reps: usize,
    pub tpr: Summary,
    pub fpr: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn get(&self, model: ModelId, method: Method) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.method == method)
    }
}

/// Outlier indices found by `method`.
pub fn run_method(
    method: Method,
    ds: &crate::data::FunctionalDataset,
    cfg: &DetectionConfig,
) -> Result<Vec<usize>> {
    match method {
        Method::TvdMsv => Ok(detect(ds, cfg)?.all_outliers()),
        Method::MbdFbplot => mbd_boxplot_outliers(ds, cfg),
    }
}

/// Per-repetition rates of every method, in method order.
fn run_rep(cfg: &BenchConfig, model: ModelId, rep: usize) -> Result<Vec<Rates>> {
    let sim = simulate(&cfg.rep_spec(model, rep))?;
    cfg.methods
        .iter()
        .map(|&method| {
            let found = run_method(method, &sim.dataset, &cfg.detection)?;
            evaluate(&found, &sim.truth)
        })
        .collect()
}

pub fn bench(cfg: &BenchConfig) -> Result<BenchTable> {
    if cfg.reps == 0 {
        return Err(Error::InvalidData("reps must be at least 1".into()));
    }
    cfg.detection.validate()?;
    let mut rows = Vec::new();
    for &model in &cfg.models {
        // collected in repetition order regardless of scheduling
        let per_rep: Vec<Vec<Rates>> = (0..cfg.reps)
            .into_par_iter()
            .map(|rep| run_rep(cfg, model, rep))
            .collect::<Result<_>>()?;
        for (k, &method) in cfg.methods.iter().enumerate() {
            rows.push(BenchRow {
                model,
                method,
                reps: cfg.reps,
                tpr: Summary::of(per_rep.iter().map(|r| r[k].tpr)),
                fpr: Summary::of(per_rep.iter().map(|r| r[k].fpr)),
            });
        }
    }
    Ok(BenchTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let mut truth = vec![false; 10];
        truth[1] = true;
        truth[2] = true;
        let r = evaluate(&[2, 3], &truth).unwrap();
        assert_eq!(r.tpr, Some(50.0));
        assert_eq!(r.fpr, Some(12.5));
        let r = evaluate(&[1, 2], &truth).unwrap();
        assert_eq!((r.tpr, r.fpr), (Some(100.0), Some(0.0)));
        let r = evaluate(&[], &truth).unwrap();
        assert_eq!((r.tpr, r.fpr), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn evaluate_without_positives() {
        let r = evaluate(&[0], &[false, false]).unwrap();
        assert_eq!(r.tpr, None);
        assert_eq!(r.fpr, Some(50.0));
        assert!(evaluate(&[5], &[false]).is_err());
    }

    #[test]
    fn summary_stats() {
        let s = Summary::of([Some(1.0), None, Some(3.0)]);
        assert_eq!(s.count, 2);
        assert_eq!(s.mean, Some(2.0));
        assert!((s.sd.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Summary::of([None]).mean, None);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("ed".parse::<Method>().is_err());
    }

    #[test]
    fn small_bench_is_reproducible() {
        let cfg = BenchConfig {
            models: vec![ModelId::new(2).unwrap()],
            reps: 4,
            base_seed: 3,
            ..Default::default()
        };
        let a = bench(&cfg).unwrap();
        let b = bench(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
    }
}
