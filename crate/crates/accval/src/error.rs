use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{source_name}, line {line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },
    #[error("{source_name}: {message}")]
    Input {
        source_name: String,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] accval_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl AppError {
    pub fn parse(source_name: &str, line: u64, message: impl Into<String>) -> Self {
        AppError::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub fn input(source_name: &str, message: impl Into<String>) -> Self {
        AppError::Input {
            source_name: source_name.to_string(),
            message: message.into(),
        }
    }

    /// 2 for numerical-domain failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Model(e) if e.is_numerical_domain() => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;
