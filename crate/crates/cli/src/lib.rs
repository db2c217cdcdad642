//! Scenario files, presets and CSV runners for the `pmdyn` binary.

pub mod config;
pub mod format;
pub mod presets;
pub mod run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Physics(#[from] pmdyn::Error),
    #[error("validation failed")]
    Validation,
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Validation => 4,
        }
    }
}
