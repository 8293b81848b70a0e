use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Array dimensions disagree with a header or with each other.
    #[error("shape error: {0}")]
    Shape(String),

    /// Malformed file content at a specific location.
    #[error("format error in {path}: {location}: {message}")]
    Format {
        path: PathBuf,
        location: String,
        message: String,
    },

    /// Configuration failed validation before any computation ran.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The naive oracle refuses inputs it cannot enumerate.
    #[error("input too large for the brute-force oracle: n = {n} exceeds {limit}")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Tag an error with the pipeline stage that raised it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// True for errors detected while validating inputs, before computing.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Config(_) | Error::Shape(_) | Error::Format { .. } | Error::Io { .. } => true,
            Error::Stage { source, .. } => source.is_validation(),
            _ => false,
        }
    }

    /// Process exit code: 2 for validation failures, 3 for computation failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            3
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
