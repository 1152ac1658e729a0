use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("action matrices do not commute (generators {0} and {1})")]
    NonCommutingActions(usize, usize),

    #[error("invalid action for generator {index}: {reason}")]
    InvalidAction { index: usize, reason: String },

    #[error("polynomial is reducible: {0}")]
    Reducible(String),

    #[error("j-invariant is constant: the curve is isotrivial")]
    Isotrivial,

    #[error("ring is not local: {0}")]
    NotLocal(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("cohomology did not stabilize between levels {level} and {next}")]
    StabilizationFailure { level: u32, next: u32 },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
