use thiserror::Error;

/// Errors produced by the library.
///
/// `TheoremViolation` is kept apart from the other variants: it never comes
/// from bad input, only from a failed internal consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {0} out of range (must satisfy 2 <= q <= 256)")]
    FieldOrder(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("element value {value} out of range for GF({q})")]
    ElementRange { value: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for ground set of size {n}")]
    IndexRange { index: usize, n: usize },
    #[error("cover relations contain a cycle through element {0}")]
    Cycle(usize),
    #[error("set {mask:#b} is not an ideal")]
    NotAnIdeal { mask: u32 },
    #[error("{what}: {value} exceeds cap {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// True for failures of an internal theorem check (as opposed to bad input).
    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
