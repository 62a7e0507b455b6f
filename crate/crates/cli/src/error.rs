use fraisse_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Unknown(String),

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// Exit status: 4 for unknown names, 3 for every other input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unknown(_) | CliError::Core(Error::UnknownBuiltin(_) | Error::UnknownPredicate(_)) => 4,
            _ => 3,
        }
    }
}
