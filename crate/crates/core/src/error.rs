use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),

    #[error("matrix is singular or its inverse is inaccurate: {0}")]
    Singular(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("enumeration would visit {candidates} candidates, above the limit {limit}")]
    TooManyCandidates { candidates: u128, limit: u128 },

    #[error("successive minima: radius doubling exceeded {0} rounds")]
    RadiusCap(usize),

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not supported for this body")]
    Unsupported(&'static str),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("rotation #{index}: {source}")]
    Sweep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}
