use thiserror::Error;

use crate::lp::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The entropy data violates normalization, monotonicity or supermodularity.
    #[error("entropy data failed validation: {0}")]
    Validation(String),

    #[error("requested tolerance {0} is below what tabular entropies can deliver")]
    PrecisionUnachievable(String),

    #[error(transparent)]
    Lp(#[from] LpError),

    /// A proof obligation that must hold on valid inputs did not hold.
    #[error("internal contract violated: {0}")]
    Contract(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::Validation(_)
            | Error::PrecisionUnachievable(_)
            | Error::Io(_) => 2,
            Error::Lp(_) | Error::Contract(_) => 3,
        }
    }
}
