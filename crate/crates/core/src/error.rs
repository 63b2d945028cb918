use std::path::PathBuf;

use thiserror::Error;

use crate::simulability::SimulabilityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("transfer matrix is not a contraction: largest singular value {largest_singular_value}")]
    NotAContraction { largest_singular_value: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("ordering parameter {ordering} is singular for this quasiprobability distribution")]
    SingularOrdering { ordering: f64 },

    #[error("mode {mode}: {what} ordering {ordering} is beyond the nonnegativity bound {bound}")]
    Negativity { mode: usize, what: &'static str, ordering: f64, bound: f64 },

    #[error("detector efficiency is zero; the nonnegativity bound is undefined")]
    DegenerateDetector,

    #[error("simulability violated: {0}")]
    SimulabilityViolated(String),

    #[error("experiment is not simulatable by this method (margin {margin:?})", margin = .0.margin)]
    NotSimulatable(Box<SimulabilityReport>),

    #[error("unsupported source on port {port}: {kind} is not a Gaussian state")]
    UnsupportedSource { port: usize, kind: &'static str },

    #[error("sample batch is empty")]
    EmptyBatch,

    #[error("outcome spaces differ: {0}")]
    MismatchedOutcomes(String),

    #[error("Fock truncation error {error:e} exceeds {tolerance:e}; use n_max >= {suggested_n_max}")]
    Truncation { error: f64, tolerance: f64, suggested_n_max: usize },

    #[error("oracle size limit exceeded: {0}")]
    OracleTooLarge(String),

    #[error("operating point undefined: {0}")]
    UndefinedOperatingPoint(String),

    #[error("{field}: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
