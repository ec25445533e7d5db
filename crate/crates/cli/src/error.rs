use std::fmt::Display;

/// Failure of a CLI verb, mapped one-to-one onto a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Exit code 2: the config is malformed or a parameter is out of range.
    #[error("config error: {0}")]
    Config(String),
    /// Exit code 3: a numerical self-consistency check failed.
    #[error("numerical contract violated: {0}")]
    Numerical(String),
    /// Exit code 1.
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn config(key: &str, msg: impl Display) -> Self {
        CliError::Config(format!("{key}: {msg}"))
    }

    /// Attributes a model error to the config key whose value caused it.
    pub fn from_model(key: &str, err: einselect::Error) -> Self {
        match err {
            einselect::Error::Contract(m) => CliError::Numerical(format!("{key}: {m}")),
            einselect::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::config(key, other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
