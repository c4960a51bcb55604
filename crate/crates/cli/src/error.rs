use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] casimir_lamb::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("route spread {spread:e} exceeds tolerance {tolerance:e}")]
    SpreadExceeded { spread: f64, tolerance: f64 },
    #[error("self-test failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for bad input, 3 for a physical-regime violation, 4 for numerical trouble.
    pub fn exit_code(&self) -> u8 {
        use casimir_lamb::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(
                E::WeakCoupling { .. } | E::OutOfRegime { .. } | E::ConfinementBound { .. },
            ) => 3,
            CliError::Core(E::NonConvergence { .. }) => 4,
            CliError::Core(_) => 2,
            CliError::SpreadExceeded { .. } | CliError::CheckFailed(_) => 4,
        }
    }
}
