use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("digit {digit} out of range for residue field of order {q}")]
    DigitOutOfRange { digit: u32, q: u32 },
    #[error("element is not a unit (constant digit is zero)")]
    NonUnit,
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("precision exhausted: pivot valuation cannot be determined at precision {0}")]
    PrecisionExhausted(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("exponent order violated: {a} > {b}")]
    ExponentOrder { a: usize, b: usize },
    #[error("value of level {level} is not {exp}-torsion")]
    NotTorsion { level: usize, exp: usize },
    #[error("inconsistent functional: {0}")]
    Inconsistent(String),
    #[error("operation requires {0} characteristic")]
    WrongMode(&'static str),
    #[error("invalid hom entry at ({row}, {col}): {reason}")]
    InvalidHom {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("value {0} is not in (1/p)Z/Z")]
    NotPTorsion(String),
    #[error("enumeration budget exceeded: {size} > {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("cokernel is infinite")]
    InfiniteCokernel,
    #[error("ring rejected: {0}")]
    Rejected(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
