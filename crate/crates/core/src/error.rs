use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: cannot parse {value:?} as a finite number")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },
    #[error("row {row}: label column {column} out of range for {fields} fields")]
    LabelColumnOutOfRange {
        row: usize,
        column: usize,
        fields: usize,
    },
    #[error("no data rows")]
    Empty,
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("covariance repair failed: {0}")]
    CovarianceRepair(String),
    #[error("unknown synthetic dataset id {0} (expected 1..=5)")]
    UnknownSynthetic(u32),
    #[error("k = {k} is invalid for a dataset of {m} points")]
    InvalidK { k: usize, m: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("at least two clusters are required")]
    SingleCluster,
    #[error("cluster {0} has no members")]
    EmptyCluster(usize),
    #[error("centroids {0} and {1} coincide")]
    CoincidentCentroids(usize, usize),
    #[error("too many labels for optimal matching ({0} > 64)")]
    TooManyLabels(usize),
    #[error("invalid enrichment query: {0}")]
    InvalidQuery(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("dataset has no ground-truth labels")]
    MissingTruth,
    #[error("nondeterministic result: {0}")]
    Nondeterministic(String),
    #[error("cannot plot {0}-dimensional data")]
    PlotDimension(usize),
    #[error("malformed record: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
