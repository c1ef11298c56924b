use thiserror::Error;

/// Errors surfaced by the library.
///
/// `InvalidGraphon` and `InvalidInput` are caller mistakes (bad data or a
/// violated precondition); `Numerical` signals an internal inconsistency
/// detected at run time (a solver that did not converge, an identity that
/// failed beyond tolerance); `Overflow` means a count does not fit in the
/// supported integer range.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
