use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {j} is not a unit modulo {n}")]
    NotCoprime { j: i64, n: u64 },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("invalid discriminant {0}: must be squarefree and positive")]
    InvalidDiscriminant(u64),
}
