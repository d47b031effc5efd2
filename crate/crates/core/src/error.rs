use thiserror::Error;

/// A scalar literal that does not belong to the accepted lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar {text:?}: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: &'static str,
}

/// A problem in a vector, matrix, or dataset file. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line {line}: expected {expected} entries, found {found}")]
    LineLength { line: usize, expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid inner product weight: {0}")]
    InvalidWeight(String),

    #[error("at least one conditioner is required")]
    NoConditioners,

    #[error("conditioner at position {index} is the zero vector")]
    ZeroConditioner { index: usize },

    #[error("squared norm {value} is negative beyond tolerance")]
    NegativeSquaredNorm { value: f64 },

    #[error("singular system: {what} vanishes (value {witness})")]
    Singular { what: &'static str, witness: String },

    #[error("collinear predictors: {what} vanishes (value {witness})")]
    Collinear { what: &'static str, witness: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid minor specification: {0}")]
    InvalidMinor(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no admissible random draw after {0} attempts")]
    RedrawCap(usize),

    #[error(transparent)]
    Scalar(#[from] ParseScalarError),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
