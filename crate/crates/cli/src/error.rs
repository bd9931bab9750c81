use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input file or spec document.
    #[error("{0}")]
    Parse(String),
    /// Well-formed input rejected by the library.
    #[error(transparent)]
    Invalid(#[from] licorm::Error),
    /// A referenced file could not be read or the report could not be written.
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// Computation produced a non-finite or otherwise unusable result.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 3,
            _ => 2,
        }
    }

    /// Stable identifier written into the error object.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Invalid(_) => "validation",
            CliError::Io { .. } => "io",
            CliError::Numeric(_) => "numeric",
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
