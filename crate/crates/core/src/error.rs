use thiserror::Error;

/// Errors raised by body construction and the numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("support function is infinite in this direction")]
    InfiniteSupport,

    #[error("hyperplane section is unbounded in this direction")]
    UnboundedSlice,

    #[error("operation not supported for this body: {0}")]
    Unsupported(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("design matrix is rank deficient ({rows}x{cols})")]
    RankDeficient { rows: usize, cols: usize },

    #[error("section profile is identically zero")]
    ZeroProfile,

    #[error("section volume underflows at depth {depth:e}")]
    Underflow { depth: f64 },

    #[error("structural multiplicity m(n-1) = {0} is odd")]
    StructurallyInfeasible(usize),

    #[error("serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
