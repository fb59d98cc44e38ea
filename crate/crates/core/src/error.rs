use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element does not belong to this tower: {0}")]
    TowerMismatch(String),
    #[error("not a group homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cocycle relation fails at ({g1}, {g2})")]
    CocycleFailure { g1: usize, g2: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {needed} candidates needed, budget {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("internal verification failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
