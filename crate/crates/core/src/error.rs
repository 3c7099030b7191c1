use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model has no unit element")]
    MissingUnit,
    #[error("sampling cap exceeded: {0}")]
    CapExceeded(String),
    #[error("goal not well-formed for {system}: {reason}")]
    IllFormed { system: String, reason: String },
    #[error("invalid budget: {0}")]
    Budget(String),
    #[error("distinguished letter `{0}` occurs in the source formula")]
    MCollision(String),
    #[error("closure violation: {0}")]
    Closure(String),
    #[error("unit already present")]
    UnitPresent,
    #[error("negation is not allowed here: {0}")]
    NegationFound(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
