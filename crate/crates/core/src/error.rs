use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("malformed entry: {0}")]
    MalformedEntry(String),
    #[error("arity mismatch for {pred}: {left} vs {right}")]
    ArityMismatch { pred: String, left: usize, right: usize },
    #[error("universe of {0} variables exceeds the enumeration bound")]
    UniverseTooLarge(usize),
    #[error("model set is not positive")]
    NotPositive,
    #[error("formula mentions a variable outside the universe")]
    OutsideUniverse,
    #[error("unknown entry predicate {0}")]
    UnknownEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
