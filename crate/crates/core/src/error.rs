use thiserror::Error;

/// Errors raised while building or evaluating algebraic objects.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("generator tables differ")]
    TableMismatch,
    #[error("image of {0} has the wrong parity")]
    ParityMismatch(String),
    #[error("expected form-degree {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: String },
    #[error("singular body: {0}")]
    SingularBody(String),
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
    #[error("dimension {dim} exceeds bound {bound}")]
    DimensionBound { dim: usize, bound: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
