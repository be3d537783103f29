use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A Gram matrix that must be positive definite is singular or too ill-conditioned.
    #[error("rank deficiency: {0}")]
    Rank(String),

    /// The instance has b = 0, for which the ratio model is undefined.
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    /// The instance exceeds the size where exhaustive verification is allowed.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
