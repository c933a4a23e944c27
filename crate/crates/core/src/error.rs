use thiserror::Error;

/// Errors produced by the solver, the oracles and the instance parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("ground set of size {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },

    /// The point at `index` lies (numerically) in the affine hull of the
    /// points that precede it.
    #[error("affinely dependent point at index {index}")]
    Degenerate { index: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

pub(crate) fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}
