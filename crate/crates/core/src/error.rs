use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid sphere coordinate: {0}")]
    InvalidCoordinate(String),

    #[error("invalid Lie line: {0}")]
    InvalidLine(String),

    #[error("not a Laguerre group element: {0}")]
    InvalidElement(String),

    #[error("degenerate surface at grid index {index:?}: {reason}")]
    DegenerateSurface { index: Vec<usize>, reason: String },

    #[error("contact element outside the embedding domain: {0}")]
    EmbeddingDomain(String),

    #[error("insufficient interior: {0}")]
    InsufficientInterior(String),

    #[error("tolerance breach in {identity}: {value:e} exceeds {limit:e}")]
    ToleranceBreach {
        identity: String,
        value: f64,
        limit: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn degenerate(index: Vec<usize>, reason: impl Into<String>) -> Self {
        Error::DegenerateSurface {
            index,
            reason: reason.into(),
        }
    }
}
