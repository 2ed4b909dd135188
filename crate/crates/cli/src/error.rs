use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario document could not be parsed.
    #[error("malformed scenario: {0}")]
    Malformed(String),
    /// The document parsed but violates an invariant.
    #[error("invalid scenario: {field}: {message}")]
    Validation { field: String, message: String },
    /// A numerical routine failed while running.
    #[error(transparent)]
    Numerical(#[from] qentropy::Error),
    /// A run finished but one of its checked invariants did not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { field: field.into(), message: message.into() }
    }

    /// 0 success, 1 invariant or validation failure, 2 malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) | CliError::Io(_) => 2,
            CliError::Validation { .. } | CliError::Numerical(_) | CliError::Invariant(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
