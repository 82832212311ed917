use thiserror::Error;

use crate::independence::GuardViolation;

/// Errors raised by the curve and blossom kernels.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate configuration: {detail}")]
    DegenerateConfiguration {
        detail: String,
        guards: Vec<GuardViolation>,
    },

    #[error("the functions G_n,k are linearly dependent for these parameters: {detail}")]
    DependentBasis {
        detail: String,
        guards: Vec<GuardViolation>,
    },

    #[error("blossom arity mismatch: expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("pairings require an even number of indices, got {0}")]
    OddArity(usize),

    #[error("blossom of unity is undefined: pairing sum {sum:e} vanishes for n = {n}, h = {h}")]
    UnityUndefined { n: usize, h: f64, sum: f64 },

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("unsupported degree elevation: {0}")]
    UnsupportedElevation(String),

    #[error("translation matrix is singular (det = {0:e})")]
    SingularMatrix(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    /// Stable machine-readable code used by the JSON encodings.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::DegenerateConfiguration { .. } => "DegenerateConfiguration",
            Error::DependentBasis { .. } => "DependentBasis",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::OddArity(_) => "OddArity",
            Error::UnityUndefined { .. } => "UnityUndefined",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::UnsupportedElevation(_) => "UnsupportedElevation",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }

    /// Guard violations attached to the error, if any.
    pub fn guards(&self) -> &[GuardViolation] {
        match self {
            Error::DegenerateConfiguration { guards, .. } | Error::DependentBasis { guards, .. } => {
                guards
            }
            _ => &[],
        }
    }

    pub(crate) fn degenerate(detail: impl Into<String>, guards: Vec<GuardViolation>) -> Self {
        Error::DegenerateConfiguration {
            detail: detail.into(),
            guards,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
