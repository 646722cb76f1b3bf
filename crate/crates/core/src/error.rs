use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring coefficient overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("leaf {leaf} out of range (tree has {count} leaves)")]
    LeafOutOfRange { leaf: usize, count: usize },
    #[error("no node at path {0}")]
    NoNodeAtPath(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("point {0} is outside (0,1]")]
    Domain(String),
    #[error("element has y-parity 1; it does not lie in V_xz")]
    ParityViolation,
    #[error("element is the identity")]
    Identity,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
