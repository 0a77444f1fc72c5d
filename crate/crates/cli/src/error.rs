use thiserror::Error;

/// Exit codes: 0 success, 2 configuration or parse error, 3 numeric error,
/// 4 inconclusive verdict under `--strict`.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    /// Wraps a library error, naming the config field it came from.
    pub fn from_core(field: &str, e: kolmo_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(format!("{field}: {e}"))
        } else {
            CliError::Config(format!("{field}: {e}"))
        }
    }
}

pub trait CoreContext<T> {
    fn field(self, field: &str) -> Result<T, CliError>;
}

impl<T> CoreContext<T> for kolmo_core::Result<T> {
    fn field(self, field: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::from_core(field, e))
    }
}
