//! Simulation models, the MBD baseline and the benchmark harness.

pub mod bench;
pub mod gp;
pub mod mbd;
pub mod models;
pub mod rng;

pub use bench::{bench, evaluate, BenchConfig, BenchRow, BenchTable, Method, Rates, Summary};
pub use gp::{gp_sample, GpSampler, PowerExponential};
pub use mbd::{mbd, mbd_boxplot_outliers};
pub use models::{simulate, ModelId, ModelSpec, SimulatedDataset};
