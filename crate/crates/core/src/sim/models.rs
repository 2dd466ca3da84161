//! The seven contamination models.
//!
//! All models live on an equally spaced grid of `[0, 1]` with Gaussian noise
//! `e(t)` of covariance `exp(-|s - t|)`. Model 1 is uncontaminated; in the
//! others each curve is an outlier independently with probability `eps`:
//!
//! | model | base                | outlier                                        |
//! |-------|---------------------|------------------------------------------------|
//! | 1     | `4t + e`            | none                                           |
//! | 2     | `4t + e`            | `+ 6 sigma` everywhere                         |
//! | 3     | `4t + e`            | `+ 6 sigma` for `t >= T`, `T ~ U[0, 1]`        |
//! | 4     | `4t + e`            | `+ 6 sigma` on `[T, T + 0.08]`, `T ~ U[0, 0.92]` |
//! | 5     | `4t + e`            | noise replaced by covariance `6 exp(-|s-t|^0.1)` |
//! | 6     | `4t + e`            | `+ 0.5 sin(40 pi t)`                           |
//! | 7     | `2 sin(15 pi t) + e`| phase `+2`: `2 sin(15 pi t + 2) + e`           |
//!
//! `sigma` is `+1` or `-1` with equal probability.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gp::{standard_normals, GpSampler, PowerExponential};
use super::rng::curve_rng;
use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};

pub const BASE_KERNEL: PowerExponential = PowerExponential::new(1.0, 1.0);
pub const MODEL5_KERNEL: PowerExponential = PowerExponential::new(6.0, 0.1);
pub const SHIFT_MAGNITUDE: f64 = 6.0;
pub const PEAK_LENGTH: f64 = 0.08;
pub const DEFAULT_CONTAMINATION: f64 = 0.10;

/// One of the seven simulation models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ModelId(u8);

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId(1),
        ModelId(2),
        ModelId(3),
        ModelId(4),
        ModelId(5),
        ModelId(6),
        ModelId(7),
    ];

    pub fn new(id: u8) -> Result<Self> {
        if (1..=7).contains(&id) {
            Ok(Self(id))
        } else {
            Err(Error::InvalidData(format!("model must be 1..=7, got {id}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for ModelId {
    type Error = Error;
    fn try_from(id: u8) -> Result<Self> {
        Self::new(id)
    }
}

impl From<ModelId> for u8 {
    fn from(id: ModelId) -> u8 {
        id.0
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let id: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidData(format!("not a model number: {s:?}")))?;
        Self::new(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelId,
    pub n: usize,
    pub m: usize,
    pub contamination: f64,
    pub seed: u64,
}

impl ModelSpec {
    /// `n = 100` curves on `m = 50` points with 10% contamination.
    pub fn standard(model: ModelId, seed: u64) -> Self {
        Self {
            model,
            n: 100,
            m: 50,
            contamination: DEFAULT_CONTAMINATION,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidData("n must be at least 1".into()));
        }
        if self.m < 2 {
            return Err(Error::InvalidData("m must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.contamination) {
            return Err(Error::InvalidData(format!(
                "contamination must lie in [0, 1], got {}",
                self.contamination
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedDataset {
    pub dataset: FunctionalDataset,
    /// `true` for curves generated as outliers.
    pub truth: Vec<bool>,
}

impl SimulatedDataset {
    pub fn outlier_indices(&self) -> Vec<usize> {
        self.truth
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(j, _)| j)
            .collect()
    }
}

struct Samplers {
    base: GpSampler,
    rough: Option<GpSampler>,
}

fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// One curve. Draw order: base noise, contamination flag, then the
/// contamination parameters, so a curve's base noise does not depend on `eps`.
fn simulate_curve<R: Rng>(
    model: u8,
    t: &[f64],
    eps: f64,
    samplers: &Samplers,
    rng: &mut R,
) -> (Vec<f64>, bool) {
    let z = standard_normals(rng, t.len());
    let mut e = samplers.base.transform(&z);
    let contaminated = model != 1 && rng.random::<f64>() < eps;

    let mut x: Vec<f64> = if model == 7 {
        t.iter().map(|&ti| 2.0 * (15.0 * PI * ti).sin()).collect()
    } else {
        t.iter().map(|&ti| 4.0 * ti).collect()
    };

    if contaminated {
        match model {
            2 => {
                let s = sign(rng) * SHIFT_MAGNITUDE;
                x.iter_mut().for_each(|v| *v += s);
            }
            3 => {
                let s = sign(rng) * SHIFT_MAGNITUDE;
                let start: f64 = rng.random();
                for (v, &ti) in x.iter_mut().zip(t) {
                    if ti >= start {
                        *v += s;
                    }
                }
            }
            4 => {
                let s = sign(rng) * SHIFT_MAGNITUDE;
                let start = rng.random::<f64>() * (1.0 - PEAK_LENGTH);
                for (v, &ti) in x.iter_mut().zip(t) {
                    if start <= ti && ti <= start + PEAK_LENGTH {
                        *v += s;
                    }
                }
            }
            5 => {
                let rough = samplers.rough.as_ref().expect("model 5 sampler");
                e = rough.sample(rng);
            }
            6 => {
                for (v, &ti) in x.iter_mut().zip(t) {
                    *v += 0.5 * (40.0 * PI * ti).sin();
                }
            }
            7 => {
                for (v, &ti) in x.iter_mut().zip(t) {
                    *v = 2.0 * (15.0 * PI * ti + 2.0).sin();
                }
            }
            _ => unreachable!("model 1 is never contaminated"),
        }
    }
    for (v, ei) in x.iter_mut().zip(e) {
        *v += ei;
    }
    (x, contaminated)
}

pub fn simulate(spec: &ModelSpec) -> Result<SimulatedDataset> {
    spec.validate()?;
    let grid = Grid::unit_interval(spec.m)?;
    let samplers = Samplers {
        base: GpSampler::new(|s, t| BASE_KERNEL.eval(s, t), &grid)?,
        rough: if spec.model.get() == 5 {
            Some(GpSampler::new(|s, t| MODEL5_KERNEL.eval(s, t), &grid)?)
        } else {
            None
        },
    };
    let model = spec.model.get();
    let curves: Vec<(Vec<f64>, bool)> = (0..spec.n)
        .into_par_iter()
        .map(|j| {
            let mut rng = curve_rng(spec.seed, j);
            simulate_curve(model, grid.points(), spec.contamination, &samplers, &mut rng)
        })
        .collect();
    let truth = curves.iter().map(|(_, c)| *c).collect();
    let values = curves.into_iter().flat_map(|(x, _)| x).collect();
    Ok(SimulatedDataset {
        dataset: FunctionalDataset::new(grid, values, spec.n)?,
        truth,
    })
}
