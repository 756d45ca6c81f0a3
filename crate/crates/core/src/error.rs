use thiserror::Error;

use crate::scalar::Backend;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation outside support at x = {point}: {detail}")]
    EvaluationOutsideSupport { point: String, detail: String },

    #[error("backend mismatch ({backend}): {detail}")]
    BackendMismatch { backend: Backend, detail: String },

    #[error("ordering violation between indices {0} and {1}")]
    OrderingViolation(usize, usize),

    #[error("points {0} and {1} are closer than the minimum gap {2}")]
    GapViolation(usize, usize, f64),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquareMatrix { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid has {got} usable points, need at least {need}")]
    InsufficientGrid { need: usize, got: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("singular denominator {value} at points [{points}]")]
    SingularDenominator { value: String, points: String },

    #[error("point {0} coincides with a base point")]
    DuplicatePoint(String),

    #[error("interval length {length} exceeds {max}")]
    DomainTooLong { length: f64, max: f64 },

    #[error("domain override outside the valid domain requires the unsafe flag")]
    UnsafeDomain,

    #[error("anchors infeasible: {0}")]
    AnchorInfeasible(String),

    #[error("bound violated: estimate {estimate} exceeds bound {bound}")]
    BoundViolated {
        estimate: String,
        bound: String,
        partition: Vec<String>,
        a_anchor: Vec<String>,
        b_anchor: Vec<String>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EvaluationOutsideSupport { .. } => "EvaluationOutsideSupport",
            Error::BackendMismatch { .. } => "BackendMismatch",
            Error::OrderingViolation(..) => "OrderingViolation",
            Error::GapViolation(..) => "GapViolation",
            Error::NonSquareMatrix { .. } => "NonSquareMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InsufficientGrid { .. } => "InsufficientGrid",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::DuplicatePoint(_) => "DuplicatePoint",
            Error::DomainTooLong { .. } => "DomainTooLong",
            Error::UnsafeDomain => "UnsafeDomain",
            Error::AnchorInfeasible(_) => "AnchorInfeasible",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
