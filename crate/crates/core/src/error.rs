use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the configured maximum {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("operator is not invariant (commutator residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error(
        "no separable decomposition exists: <S1.S2> = {c1} is below -S/2 = {bound}, \
         the partial transpose is not positive"
    )]
    CertificateUnavailable { c1: f64, bound: f64 },

    #[error("quadrature did not converge: reconstruction error {achieved:.3e} > {target:.3e}")]
    Convergence { achieved: f64, target: f64 },

    #[error("Hilbert space dimension {dim} exceeds the capacity {cap}")]
    Capacity { dim: usize, cap: usize },

    #[error("no threshold temperature: {0}")]
    NoThreshold(String),
}

pub type Result<T> = std::result::Result<T, Error>;
