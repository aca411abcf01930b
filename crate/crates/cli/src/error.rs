use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] betakit_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_undetermined() => EXIT_UNDETERMINED,
            _ => EXIT_DOMAIN,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
