//! Ingestion of curves, images and frames; JSON output documents.

pub mod csv;
pub mod pgm;
pub mod report;

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::FunctionalDataset;
use crate::error::{Error, Result};

pub use self::csv::{read_long_csv, read_truth, read_wide_csv, write_truth, write_wide_csv};
pub use self::pgm::read_pgm_dir;
pub use self::report::{read_report, write_geometry, write_report, ReportDocument, ReportMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum InputFormat {
    /// Header row of grid coordinates, one curve per row.
    WideCsv,
    /// Columns `curve_id,t,value`.
    LongCsv,
    /// Directory of PGM images, one curve per image.
    PgmDir,
}

/// Where a dataset comes from. A path of `-` reads CSV from standard input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub format: InputFormat,
    pub path: PathBuf,
    pub subsample_stride: usize,
}

impl InputDescriptor {
    /// Picks `pgm_dir` for directories and `wide_csv` otherwise when no format
    /// is given.
    pub fn new(path: impl Into<PathBuf>, format: Option<InputFormat>, stride: usize) -> Result<Self> {
        let path = path.into();
        if stride == 0 {
            return Err(Error::InvalidData("stride must be at least 1".into()));
        }
        let format = format.unwrap_or_else(|| {
            if path.is_dir() {
                InputFormat::PgmDir
            } else {
                InputFormat::WideCsv
            }
        });
        Ok(Self {
            format,
            path,
            subsample_stride: stride,
        })
    }

    pub fn is_stdin(&self) -> bool {
        self.path == Path::new("-")
    }

    /// Loads from the path, or from `stdin` when the path is `-`.
    pub fn load_with_stdin(&self, stdin: &mut dyn Read) -> Result<FunctionalDataset> {
        let stride = self.subsample_stride;
        match self.format {
            InputFormat::PgmDir => {
                if self.is_stdin() {
                    return Err(Error::InvalidData(
                        "pgm_dir input cannot come from standard input".into(),
                    ));
                }
                read_pgm_dir(&self.path, stride)
            }
            InputFormat::WideCsv if self.is_stdin() => read_wide_csv(stdin, stride),
            InputFormat::LongCsv if self.is_stdin() => read_long_csv(stdin)?.subsample(stride),
            InputFormat::WideCsv => read_wide_csv(self.open()?, stride),
            InputFormat::LongCsv => read_long_csv(self.open()?)?.subsample(stride),
        }
    }

    pub fn load(&self) -> Result<FunctionalDataset> {
        self.load_with_stdin(&mut std::io::stdin().lock())
    }

    fn open(&self) -> Result<BufReader<File>> {
        File::open(&self.path)
            .map(BufReader::new)
            .map_err(|e| Error::file(&self.path, e))
    }
}
