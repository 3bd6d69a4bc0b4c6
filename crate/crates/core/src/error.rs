use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} is too large")]
    FieldTooLarge(u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("polynomial is not monic and irreducible")]
    NotIrreducible,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported shape: {0}")]
    Unsupported(String),
    #[error("enumeration budget exceeded: {required} elements needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("randomized search did not converge")]
    NoConvergence,
    #[error("interpolation failed: {0}")]
    Interpolation(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
