//! Total variation depth for functional data.
//!
//! Curves observed on a shared grid are ranked by their total variation depth
//! (TVD), a weighted sum over grid points of the variance of the indicator
//! `1{X(t) <= f(t)}`. Splitting that variance into the part explained by the
//! previous grid point and the rest gives the modified shape variation (MSV),
//! which drives a two-stage outlier procedure: low-MSV curves are shape
//! outliers, and a functional boxplot on TVD over the remaining curves finds
//! magnitude outliers.
//!
//! Curve indices are 0-based everywhere.

pub mod cli;
pub mod data;
pub mod depth;
pub mod error;
pub mod io;
pub mod outliers;
pub mod shape;
pub mod sim;

pub use data::{FunctionalDataset, Grid};
pub use depth::{
    pointwise_depth, pointwise_median, pointwise_rank_proportions, tvd, tvd_all, weight_sd,
    weight_uniform, DepthProfile, WeightChoice, WeightVector,
};
pub use error::{Error, Result};
pub use outliers::{
    boxplot_geometry, detect, BoxplotGeometry, DetectionConfig, Envelope, MsvBoxplot,
    OutlierReport,
};
pub use shape::{
    magnitude_component, msv, pair_proportions, shape_component, shape_ratio, sv, weight_v,
    PairProportions, ShapeProfile,
};
