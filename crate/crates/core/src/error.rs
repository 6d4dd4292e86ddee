use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid assignment: {0}")]
    Validation(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("enumeration of {required} assignments exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("solver requires {expected}, instance has {found}")]
    Arity { expected: String, found: String },

    #[error("strategy {strategy} is not applicable: {reason}")]
    Dispatch { strategy: String, reason: String },

    #[error("inconsistent kernel trace: {0}")]
    Integrity(String),

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("invalid generator input: {0}")]
    Generator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
