use std::path::PathBuf;

/// Failures of a CLI invocation; each maps to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qvpde_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use qvpde_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e.root() {
                E::Config(_) | E::Parameter(_) => 2,
                _ => 3,
            },
            CliError::Verification(_) => 4,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Json(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
