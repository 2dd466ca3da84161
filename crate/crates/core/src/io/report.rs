//! JSON documents for detection reports and boxplot geometry.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::InputDescriptor;
use crate::depth::DepthProfile;
use crate::error::{Error, Result};
use crate::outliers::{BoxplotGeometry, DetectionConfig, Envelope, MsvBoxplot, OutlierReport};

pub const TOOL_NAME: &str = "tvdepth";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    /// Curve indices in the document are 0-based.
    pub index_base: u8,
    pub n: usize,
    pub m: usize,
    pub input: Option<InputDescriptor>,
    pub config: DetectionConfig,
    pub seed: Option<u64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ReportMeta {
    pub fn new(n: usize, m: usize, config: DetectionConfig) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            index_base: 0,
            n,
            m,
            input: None,
            config,
            seed: None,
            warnings: Vec::new(),
        }
    }
}

/// Serialized form of an [`OutlierReport`] plus metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub shape_outliers: Vec<usize>,
    pub magnitude_outliers: Vec<usize>,
    pub median_index: usize,
    pub tvd: Vec<f64>,
    pub msv: Vec<f64>,
    pub central_region: Envelope,
    pub central_members: Vec<usize>,
    pub fences: Envelope,
    pub msv_boxplot: MsvBoxplot,
    pub meta: ReportMeta,
}

impl ReportDocument {
    pub fn new(report: &OutlierReport, meta: ReportMeta) -> Self {
        Self {
            shape_outliers: report.shape_outliers.clone(),
            magnitude_outliers: report.magnitude_outliers.clone(),
            median_index: report.median_index,
            tvd: report.depths.tvd.clone(),
            msv: report.depths.msv.clone(),
            central_region: report.central_region.clone(),
            central_members: report.central_members.clone(),
            fences: report.fences.clone(),
            msv_boxplot: report.msv_boxplot,
            meta,
        }
    }

    /// The report without pointwise diagnostics, which are not serialized.
    pub fn to_report(&self) -> OutlierReport {
        OutlierReport {
            shape_outliers: self.shape_outliers.clone(),
            magnitude_outliers: self.magnitude_outliers.clone(),
            median_index: self.median_index,
            central_region: self.central_region.clone(),
            central_members: self.central_members.clone(),
            fences: self.fences.clone(),
            depths: DepthProfile {
                tvd: self.tvd.clone(),
                msv: self.msv.clone(),
                diagnostics: None,
            },
            msv_boxplot: self.msv_boxplot,
        }
    }
}

pub fn to_json_writer<T: Serialize, W: Write>(value: &T, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    to_json_writer(value, BufWriter::new(file))
}

pub fn write_report(doc: &ReportDocument, path: &Path) -> Result<()> {
    write_json_file(doc, path)
}

pub fn write_geometry(geometry: &BoxplotGeometry, path: &Path) -> Result<()> {
    write_json_file(geometry, path)
}

pub fn read_report<R: Read>(reader: R) -> Result<ReportDocument> {
    Ok(serde_json::from_reader(reader)?)
}

pub fn read_geometry<R: Read>(reader: R) -> Result<BoxplotGeometry> {
    Ok(serde_json::from_reader(reader)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FunctionalDataset, Grid};
    use crate::outliers::detect;

    fn spike_report() -> ReportDocument {
        let ds = FunctionalDataset::from_rows(
            Grid::new(vec![0.0, 1.0]).unwrap(),
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![5.0, 5.0]],
        )
        .unwrap();
        let cfg = DetectionConfig::default();
        let report = detect(&ds, &cfg).unwrap();
        ReportDocument::new(&report, ReportMeta::new(ds.n(), ds.m(), cfg))
    }

    #[test]
    fn json_keys_and_empty_arrays() {
        let doc = spike_report();
        let v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["magnitude_outliers"], serde_json::json!([2]));
        assert_eq!(v["shape_outliers"], serde_json::json!([]));
        assert_eq!(v["median_index"], serde_json::json!(0));
        for key in ["tvd", "msv", "central_region", "fences", "msv_boxplot", "meta"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["q1", "q3", "iqr", "lower_fence"] {
            assert!(v["msv_boxplot"].get(key).is_some(), "missing {key}");
        }
        assert!(v["central_region"]["lower"].is_array());
        assert!(v["fences"]["upper"].is_array());
    }

    #[test]
    fn report_round_trips() {
        let doc = spike_report();
        let mut buf = Vec::new();
        to_json_writer(&doc, &mut buf).unwrap();
        assert_eq!(read_report(buf.as_slice()).unwrap(), doc);
    }

    #[test]
    fn floats_round_trip_exactly() {
        let mut doc = spike_report();
        doc.tvd = vec![2.0 / 9.0, 0.1 + 0.2, 1e-300, 0.123_456_789_012_345_68];
        let mut buf = Vec::new();
        to_json_writer(&doc, &mut buf).unwrap();
        let back = read_report(buf.as_slice()).unwrap();
        assert!(back.tvd.iter().zip(&doc.tvd).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
