use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A quadrature or extrapolation did not reach its requested tolerance.
    #[error("accuracy error in {op}: estimated error {estimate:e} exceeds tolerance {tol:e}")]
    Accuracy { op: &'static str, estimate: f64, tol: f64 },

    /// A structural invariant (unit disc, hyperboloid, group determinant) was violated.
    #[error("invariant violated in {op}: {detail}")]
    Invariant { op: &'static str, detail: String },

    /// The request is valid mathematically but not offered by this library.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Operands disagree on irrep or truncation.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn invariant(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures that come from numerical accuracy rather than bad input.
    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy { .. })
    }
}
