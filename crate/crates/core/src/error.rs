use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    Range(String),
    /// The integrand produced a non-finite value on the quadrature grid.
    #[error("integration error: {0}")]
    Integration(String),
    /// Inputs lie outside the envelope where the quadrature size is known to suffice.
    #[error("accuracy warning: {0}")]
    Accuracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
