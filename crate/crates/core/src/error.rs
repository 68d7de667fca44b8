use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is below the 2^40 floor")]
    PrimeTooSmall(u64),

    #[error("no element of order {order} in F_{p}")]
    NoSuchRoot { p: u64, order: u64 },

    #[error("field F_{p} has no primitive {order}-th root of unity")]
    FieldLacksUnity { p: u64, order: u64 },

    #[error("scalar {0} does not belong to the target field")]
    FieldMismatch(String),

    #[error("{0} is not invertible in the target field")]
    NonInvertible(String),

    #[error("malformed scalar {0:?}")]
    BadScalar(String),

    #[error("operation requires a prime field")]
    RequiresPrimeField,

    #[error("expected coordinates of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} has all coordinates zero")]
    ZeroPoint(usize),

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("lines {0} and {1} coincide")]
    DuplicateLine(usize, usize),

    #[error("binom(d+N,N) - binom(m+N-1,N) = {value} is not a positive point count (N={n}, d={d}, m={m})")]
    NotSquare { n: usize, d: usize, m: usize, value: i64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("Laplace expansion needs {needed} column subsets, budget is {budget}; use the random zero-locus test instead")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("the linear system is empty")]
    Empty,

    #[error("the linear system has dimension {0}, no unique form")]
    NotUnique(usize),

    #[error("kernel form failed verification: {0}")]
    VerificationFailed(String),

    #[error("configuration lies on a single hyperplane")]
    DegenerateConfig,

    #[error("configuration has no coordinates; this operation needs them")]
    NoCoordinates,

    #[error("pencil lines {0} and {1} share a second configuration point")]
    PencilNotDistinct(usize, usize),

    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
