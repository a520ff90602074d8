use thiserror::Error;

/// Errors produced by the calculator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    /// The truncation order of the formal group law is too small for the
    /// requested computation to be exact.
    #[error("truncation unsound: need truncation at least {needed}, have {available}")]
    TruncationUnsound { needed: u32, available: u32 },

    #[error("argument is not nilpotent: {0}")]
    NotNilpotent(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("coefficient {0} is not integral")]
    NotIntegral(String),

    #[error("matrix is not invertible over the coefficient ring")]
    Singular,

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at position {position} near `{token}`: {message}")]
    Parse {
        token: String,
        position: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
