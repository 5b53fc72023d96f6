use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input was malformed or violated a precondition.
    Malformed,
    /// A truncated computation did not stabilize.
    NonStabilizing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("{combinator} not in variant {variant}")]
    NotInVariant { combinator: &'static str, variant: String },
    #[error("variant {0} has no row in the classification table")]
    NotInTable(String),
    #[error("variant {0} does not carry a monad structure")]
    NotMonadEnabled(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("{what}: {count} raw elements exceeds the cap of {cap}")]
    CapExceeded { what: String, count: u128, cap: usize },
    #[error("unbounded index range: {0}")]
    Unbounded(String),
    #[error("truncation does not stabilize: {0}")]
    NonStabilizing(String),
    #[error("shape leaves the function class: {0}")]
    OutsideClass(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonStabilizing(_) => ErrorKind::NonStabilizing,
            _ => ErrorKind::Malformed,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
