use quon_core::QuonError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("{0}")]
    Eval(#[from] QuonError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 1 usage or input error, 2 evaluation error, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 1,
            CliError::Eval(_) => 2,
            CliError::InvariantViolation(_) => 3,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parse error on a 1-based line of a line-oriented input.
pub fn line_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, column: 1, message: message.into() }
}
