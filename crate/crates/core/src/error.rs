use thiserror::Error;

/// Failure modes shared by every operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Non-finite numbers, wrong lengths, empty inputs and similar caller mistakes.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that must be positive semidefinite is not.
    #[error("domain error: {0}")]
    Domain(String),

    /// The analytic Jacobian is undefined at this state.
    #[error("jacobian singularity: {0}")]
    Singular(String),

    /// A linear-algebra step broke down or produced non-finite values.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// `true` for errors caused by the numbers rather than the caller.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Singular(_) | Error::Numerical(_))
    }
}
