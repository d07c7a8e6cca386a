use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported order for rank-1: order {order} requested with {vectors} of {dim} sum-rule vectors")]
    UnsupportedOrder { order: usize, vectors: usize, dim: usize },

    #[error("{0}")]
    Degenerate(&'static str),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("resolvent solve failed at xi = {0}: D is not contractive")]
    SingularResolvent(num_complex::Complex64),

    #[error("series does not terminate: |B D^N| = {0:e}")]
    NotNilpotent(f64),

    #[error("no root found: {0}")]
    NoRoot(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
