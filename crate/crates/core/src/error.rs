use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    /// `row` is the 1-based data row, not counting the header.
    #[error("row {row}, column \"{column}\": cannot parse {value:?} as a finite number")]
    ParseCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("label column \"{0}\" not found in header")]
    MissingLabelColumn(String),

    #[error("no feature columns")]
    NoFeatures,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("dimension mismatch: expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("need at least {required} training rows, got {found}")]
    TooFewRows { required: usize, found: usize },

    #[error("split needs at least 2 normal rows, found {0}")]
    TooFewNormals(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("AUC needs both classes, got {anomalies} anomalies and {normals} normals")]
    SingleClass { anomalies: usize, normals: usize },

    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("detector {name}: {source}")]
    Detector {
        name: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
