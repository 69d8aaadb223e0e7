use std::path::Path;

use corridor_rays_core::Error as CoreError;

/// Error carrying the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad scenario, pattern argument, flag combination or unreadable config file.
    #[error("config error: {0}")]
    Config(String),
    /// Malformed or insufficient input data.
    #[error("data error: {0}")]
    Data(String),
    /// Failure writing results.
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(msg: impl std::fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }

    pub fn data(msg: impl std::fmt::Display) -> Self {
        CliError::Data(msg.to_string())
    }

    pub fn read(path: &Path, err: impl std::fmt::Display) -> String {
        format!("{}: {err}", path.display())
    }
}

fn message(e: CoreError) -> String {
    match e {
        CoreError::Config(m) | CoreError::InvalidArgument(m) => m,
        other => other.to_string(),
    }
}

/// Core errors raised while interpreting configuration.
pub fn config_err(e: CoreError) -> CliError {
    CliError::Config(message(e))
}

/// Core errors raised while processing input data.
pub fn data_err(e: CoreError) -> CliError {
    match e {
        CoreError::Config(_) => CliError::Config(message(e)),
        _ => CliError::Data(message(e)),
    }
}

pub type CliResult<T> = Result<T, CliError>;
