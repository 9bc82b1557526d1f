use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable kind string
/// so command-line front ends can report them as machine-readable JSON.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} too large for exact mode: {size} exceeds cap {cap}{hint}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
        hint: &'static str,
    },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid minor model: {0}")]
    InvalidModel(String),

    #[error("invalid minor operation: {0}")]
    InvalidOperation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("LP is not optimal (status {0})")]
    NotOptimal(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short stable identifier of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Invalid(_) => "invalid",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::InvalidDecomposition(_) => "invalid_decomposition",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidOperation(_) => "invalid_operation",
            Error::Precondition(_) => "precondition",
            Error::Infeasible(_) => "infeasible",
            Error::NotOptimal(_) => "not_optimal",
            Error::Overflow(_) => "overflow",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::parse(e.line(), e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
