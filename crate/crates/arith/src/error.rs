use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("field of size {p}^{n} exceeds the enumeration cap {cap}")]
    TooLarge { p: u64, n: u32, cap: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}
