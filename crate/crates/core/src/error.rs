use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("attaching {node} under {parent} would create a cycle")]
    Cycle { node: usize, parent: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("inference error: {0}")]
    Inference(String),

    #[error("refusing exact enumeration for d = {d} (limit {limit})")]
    TooLarge { d: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Parse,
    Inference,
    Io,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Parse => 3,
            ErrorClass::Inference => 4,
            ErrorClass::Io => 5,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::TooLarge { .. } => ErrorClass::Config,
            Error::Parse { .. } | Error::EmptyDataset(_) | Error::Json(_) => ErrorClass::Parse,
            Error::Cycle { .. } | Error::InvalidGraph(_) | Error::Validation(_) | Error::Inference(_) => {
                ErrorClass::Inference
            }
            Error::Io(_) => ErrorClass::Io,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.class().exit_code()
    }
}
