use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("instance too large for exact oracle: {uncertain} uncertain colored edges (cap {cap})")]
    TooLarge { uncertain: usize, cap: usize },

    #[error("leaning assumption violated: every node and item has the same leaning")]
    AssumptionViolated,

    #[error("memory budget exceeded: {needed} bytes needed, budget {budget} bytes")]
    MemoryBudget { needed: u64, budget: u64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse error category, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Parse,
    Config,
    Resource,
    Other,
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Parse { .. } => Category::Parse,
            Error::Invalid(_) | Error::Config(_) | Error::AssumptionViolated => Category::Config,
            Error::TooLarge { .. } | Error::MemoryBudget { .. } | Error::Io { .. } => {
                Category::Resource
            }
            Error::Empty(_) => Category::Other,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
