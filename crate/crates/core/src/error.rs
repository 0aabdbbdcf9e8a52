use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("no vertices")]
    NoVertices,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: String, value: f64 },

    #[error("vertex function has {got} values, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at vertex index {0}")]
    NonFinite(usize),

    #[error("vertex function belongs to a different graph")]
    GraphMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nonlinearity regime mismatch: {0}")]
    Regime(String),

    #[error("non-differentiable configuration: {0}")]
    NonDifferentiable(String),

    #[error("mountain-pass anchor has energy {0} >= 0")]
    AnchorEnergy(f64),

    #[error("io error on `{path}`: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(what: impl Into<String>, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive {
            what: what.into(),
            value,
        })
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
