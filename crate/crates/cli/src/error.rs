use std::fmt;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("constraint violated: {0}")]
    Violation(String),

    #[error("{0}")]
    Core(#[from] growth_lab::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Core(_) => EXIT_CONFIG,
        }
    }

    pub(crate) fn key(key: &str, msg: impl fmt::Display) -> Self {
        CliError::Config(format!("{key}: {msg}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
