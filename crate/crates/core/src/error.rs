use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gcd of zero polynomials undefined")]
    GcdOfZero,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not square-free; call squarefree_part first")]
    NotSquareFree,
    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooLow { required: usize, found: usize },
    #[error("invalid interval: lower bound must be below upper bound")]
    EmptyInterval,
    #[error("operator matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("operator is not sectionally nonnegative (alpha1 = {alpha1:e})")]
    NotNonnegative { alpha1: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
