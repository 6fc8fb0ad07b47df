use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One failed check from config validation, tagged with the field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {value} outside knot range [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("degenerate knot span at index {0}")]
    DegenerateSpan(usize),

    #[error("invalid patch: {0}")]
    InvalidPatch(String),

    #[error("inverted element: det(J) = {det:e} at ({xi}, {eta})")]
    InvertedElement { det: f64, xi: f64, eta: f64 },

    #[error("material instability: 1 - nu_LT * nu_TL = {0:e}")]
    MaterialInstability(f64),

    #[error("invalid ply: {0}")]
    InvalidPly(String),

    #[error("laminate has no plies")]
    EmptyStack,

    #[error("invalid level-set shape: {0}")]
    InvalidShape(String),

    #[error("element {0} is tagged enriched but no edge crosses the interface")]
    ClassificationInconsistency(usize),

    #[error("cut element needs at least two interface crossings, got {0}")]
    MissingCrossings(usize),

    #[error("triangle has zero area")]
    DegenerateTriangle,

    #[error("stiffener sizing failed: {0}")]
    Sizing(String),

    #[error("stiffener geometry: {0}")]
    StiffenerGeometry(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("constraint references missing dof {dof} (system has {size})")]
    MissingDof { dof: usize, size: usize },

    #[error("matrix not positive definite at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("eigen solver: {0}")]
    Eigen(String),

    #[error("config validation failed with {} error(s)", .0.len())]
    Validation(Vec<FieldError>),

    #[error("{context}: {source}")]
    Case {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn with_context(self, context: impl Into<String>) -> Self {
        Error::Case {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, looking through `Case` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Case { source, .. } => source.root(),
            other => other,
        }
    }
}
