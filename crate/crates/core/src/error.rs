use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by depth computation, detection, simulation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("query has {found} values but the grid has {expected} points")]
    Alignment { expected: usize, found: usize },

    #[error("proportion {value} lies outside [0, 1]")]
    Domain { value: f64 },

    #[error("sample standard deviation is zero at every grid point; sd weights are undefined")]
    DegenerateWeights,

    #[error("need at least {needed} curves, got {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("index {index} out of range (valid: {valid})")]
    IndexOutOfRange { index: usize, valid: String },

    #[error("every curve is excluded; nothing left to build a central region from")]
    EmptySelection,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("curve {curve:?} has no value at t = {t}")]
    IncompleteGrid { curve: String, t: f64 },

    #[error("curve {curve:?} has more than one value at t = {t}")]
    DuplicateCell { curve: String, t: f64 },

    #[error("no input found in {0}")]
    NoInput(PathBuf),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for data and parse problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) | Error::DegenerateWeights => 3,
            _ => 2,
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
