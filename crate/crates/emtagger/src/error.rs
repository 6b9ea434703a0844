use std::fmt::Display;
use std::path::Path;

/// Failure classes, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad flags or configuration values.
    #[error("{0}")]
    Usage(String),
    /// Unreadable, malformed or inconsistent input data.
    #[error("{0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Internal(_) => 3,
        }
    }

    pub fn usage(msg: impl Display) -> Self {
        Self::Usage(msg.to_string())
    }

    pub fn data(msg: impl Display) -> Self {
        Self::Data(msg.to_string())
    }

    /// An I/O failure on `path`.
    pub fn io(path: &Path, err: impl Display) -> Self {
        Self::Data(format!("{}: {err}", path.display()))
    }
}

impl From<emtagger_core::Error> for AppError {
    fn from(e: emtagger_core::Error) -> Self {
        match e {
            emtagger_core::Error::InvalidConfig(_) => Self::Usage(e.to_string()),
            _ => Self::Data(e.to_string()),
        }
    }
}
