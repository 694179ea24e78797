use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("malformed csv in set `{set}` at row {row}: {message}")]
    Csv {
        set: String,
        row: usize,
        message: String,
    },

    #[error("non-finite value in set `{set}` at row {row}, column {column}")]
    NonFinite {
        set: String,
        row: usize,
        column: usize,
    },

    #[error("dimension mismatch: expected d={expected}, set `{set}` has d={found}")]
    DimensionMismatch {
        set: String,
        expected: usize,
        found: usize,
    },

    #[error("set `{set}` has {points} points, need at least {required}")]
    TooFewPoints {
        set: String,
        points: usize,
        required: usize,
    },

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("divergence estimate is not finite ({value})")]
    NonFiniteEstimate { value: f64 },

    #[error("estimation failed for pair ({i}, {j}): {message}")]
    Estimation { i: usize, j: usize, message: String },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("linear system is singular")]
    Singular,

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigenNonConvergence { sweeps: usize },

    #[error("SMO did not converge after {iterations} iterations (KKT gap {gap:e})")]
    SmoNonConvergence { iterations: usize, gap: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
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

    /// The innermost error, looking through fold context.
    pub fn root(&self) -> &Error {
        match self {
            Error::InFold { source, .. } => source.root(),
            other => other,
        }
    }
}
