use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] parclass_core::Error),
    #[error("thread pool: {0}")]
    Threads(String),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for invalid input, 3 when a budget stops the computation, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use parclass_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::BudgetExceeded { .. }) => 3,
            CliError::Core(E::NoConvergence | E::Interpolation(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Threads(_) | CliError::Json(_) => 1,
        }
    }
}
