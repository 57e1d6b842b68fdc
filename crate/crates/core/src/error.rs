use frobrel_arith::ArithError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("power sums give a non-integral coefficient c_{0}")]
    NonIntegralCoefficient(usize),
    #[error("polynomial has odd degree")]
    OddDegree,
    #[error("polynomial is not q-symplectic")]
    NotSymplectic,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("polynomial is not separable over Q")]
    NotSeparable,
    #[error("factors {0} and {1} share roots")]
    SharedRoots(usize, usize),
    #[error("{p} admits no representation for d = {d}")]
    NotCongruent { p: u64, d: u64 },
    #[error("trace {a} violates the Weil bound for q = {q}")]
    WeilBoundViolated { a: i64, q: u64 },
    #[error("m = {0} is too small")]
    TooSmall(u64),
    #[error("no character of order {m} on F_{q}^*")]
    BadOrder { m: u64, q: u64 },
    #[error("q = {q} is not 1 mod {m}")]
    BadCongruence { q: u64, m: u64 },
    #[error("root systems live over different fields")]
    MismatchedField,
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl From<std::io::Error> for CoreError {
    fn from(e: std::io::Error) -> Self {
        CoreError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
