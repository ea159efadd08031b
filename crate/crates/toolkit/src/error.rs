use std::path::PathBuf;

/// Errors surfaced by the command-line front end. Each maps to a process
/// exit code through [`ToolkitError::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum ToolkitError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Core(#[from] qse_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl ToolkitError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::InvalidInput(_) | Self::Core(_) | Self::Json { .. } => 2,
            Self::Io { .. } | Self::Csv(_) => 2,
            Self::VerificationFailed(_) => 3,
        }
    }
}

pub type Result<T, E = ToolkitError> = std::result::Result<T, E>;
