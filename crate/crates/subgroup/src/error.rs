use std::fmt;

use subgroup_core::Error as CoreError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration, arguments or input files. Exit code 1.
    #[error("invalid input: {0}")]
    Input(String),
    /// The loss threshold cannot be met. Exit code 2.
    #[error("infeasible threshold: {0}")]
    Infeasible(String),
    /// A factorization or iteration failed. Exit code 3.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    /// Prefixes the message with `context`, keeping the exit code.
    pub fn context(self, context: impl fmt::Display) -> Self {
        match self {
            CliError::Input(m) => CliError::Input(format!("{context}: {m}")),
            CliError::Infeasible(m) => CliError::Infeasible(format!("{context}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{context}: {m}")),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidProfile(_)
            | CoreError::Domain { .. }
            | CoreError::Dimension(_)
            | CoreError::Estimation { .. } => CliError::Input(e.to_string()),
            CoreError::OutOfLobe { .. } | CoreError::UnboundedCoherence { .. } => {
                CliError::Infeasible(e.to_string())
            }
            CoreError::NonFinite
            | CoreError::NotPositiveSemidefinite { .. }
            | CoreError::NoConvergence(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
