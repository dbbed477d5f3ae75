use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {what} (expected {expected}, found {found})")]
    DimensionMismatch {
        what: &'static str,
        expected: String,
        found: String,
    },

    #[error("input is empty: {0}")]
    Empty(&'static str),

    #[error("traversal plan does not match the matrix: {0}")]
    PlanMismatch(String),

    #[error("NaN is not a valid matrix entry (row {row}, col {col})")]
    NotANumber { row: usize, col: usize },

    #[error("invalid weight {value} at vertex {vertex}: weights must be finite and >= 0")]
    InvalidWeight { vertex: usize, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible density: {0}")]
    Infeasible(String),

    #[error("horizon {horizon} cannot be advanced on a graph with {n} vertices")]
    HorizonOverflow { horizon: usize, n: usize },

    #[error("inconsistent edge labeling: {0}")]
    InconsistentLabel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn dims(what: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            what,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
