use thiserror::Error;

/// Errors raised by the invariant engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("order parameter N must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("index {index} out of range: {what} requires an index below {bound}")]
    Range {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("highest weight {re}{im:+}i is atypical for N = {n}")]
    Typicality { re: f64, im: f64, n: usize },

    #[error("highest weight {re}{im:+}i lies in 1/2 Z; the reference module must be generic")]
    Genericity { re: f64, im: f64 },

    #[error("endomorphism is not a scalar multiple of the identity (off-diagonal {off_diagonal:e}, diagonal spread {spread:e})")]
    Simplicity { off_diagonal: f64, spread: f64 },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("matrix inversion failed or left residual {0:e}")]
    SingularMatrix(f64),

    #[error("pole in modified dimension: factor {{{re}{im:+}i}} vanishes")]
    Pole { re: f64, im: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cut values disagree: spread {spread:e} exceeds tolerance {tolerance:e}")]
    Disagreement { spread: f64, tolerance: f64 },

    #[error("state space of dimension {states} exceeds the limit of {limit}")]
    Resource { states: u128, limit: u128 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name of the error class, used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "InvalidOrderError",
            Error::Range { .. } => "RangeError",
            Error::Typicality { .. } => "TypicalityError",
            Error::Genericity { .. } => "GenericityError",
            Error::Simplicity { .. } => "SimplicityError",
            Error::SignatureMismatch(_) => "SignatureMismatch",
            Error::SingularMatrix(_) => "SingularMatrixError",
            Error::Pole { .. } => "PoleError",
            Error::Parse(_) => "ParseError",
            Error::Disagreement { .. } => "DisagreementError",
            Error::Resource { .. } => "ResourceError",
            Error::NonFinite(_) => "NonFiniteError",
        }
    }
}
