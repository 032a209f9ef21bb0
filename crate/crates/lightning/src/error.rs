use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io { context: context.into(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Validation(_) => ExitCode::from(2),
            Self::Numerical(_) => ExitCode::from(3),
            Self::Io { .. } => ExitCode::from(1),
        }
    }
}

impl From<lightning_core::Error> for CliError {
    fn from(e: lightning_core::Error) -> Self {
        match e {
            lightning_core::Error::NoConvergence { .. } => Self::Numerical(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
