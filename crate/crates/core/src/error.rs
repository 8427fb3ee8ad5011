use thiserror::Error;

/// Errors surfaced by the library operations.
///
/// Shape mismatches between values of the *same* structure (adding a 2×3 to
/// a 3×2, mixing scalars from different fields) are programming errors and
/// panic instead; the variants here are the failure modes a caller can
/// legitimately hit with well-typed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,

    #[error("gauge element is singular")]
    SingularGauge,

    #[error("framing change matrix is singular")]
    SingularFraming,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("symbolic global-regularity certificate requires d <= 1, got d = {0}")]
    SymbolicUnsupported(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("retry budget exhausted after {attempts} attempts: {context}")]
    RetryExhausted { attempts: usize, context: String },

    #[error("invalid monad: {0}")]
    InvalidMonad(String),

    #[error("cohomology window unsupported: {0}")]
    CohomologyWindow(String),

    #[error("cannot map to F_{p}: denominator divisible by {p}")]
    DenominatorDivisibleByP { p: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
