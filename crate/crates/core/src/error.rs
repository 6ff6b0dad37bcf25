//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The closed expansion and the rewrite engine are only defined for n >= 1.
    #[error("operator power must be at least 1 (the identity is a separate constant)")]
    ZeroOperatorPower,

    /// Double factorial is defined for m >= -1 only.
    #[error("double factorial undefined for m = {0} (need m >= -1)")]
    DoubleFactorialRange(i64),

    /// The power-family exponent parameter must be strictly positive.
    #[error("alpha must be strictly positive, got {0}")]
    AlphaNotPositive(f64),

    /// A quadrature rule needs at least one node.
    #[error("quadrature order must be at least 1")]
    InvalidQuadratureOrder,

    /// Iterated integration count must be at least 1.
    #[error("iteration count must be at least 1")]
    ZeroIterations,

    /// Upper integration limit must be finite and nonnegative.
    #[error("integration endpoint must be finite and nonnegative, got {0}")]
    BadEndpoint(f64),

    /// The integrand returned NaN or infinity at a quadrature node.
    #[error("integrand returned a non-finite value at t = {node}")]
    NonFiniteSample { node: f64 },

    /// The combined ln(1+t) coefficients disagree with the expected split form.
    #[error("ln(1+t) coefficient identity failed at n = {n}, k = {k}")]
    Log1pCoefficientMismatch { n: usize, k: usize },

    /// A serialized operator or closed form could not be parsed back.
    #[error("parse error: {0}")]
    Parse(String),

    /// Malformed b-file content.
    #[error("b-file parse error at line {line}: {message}")]
    BFile { line: usize, message: String },

    /// The b-file and the locally generated range do not overlap.
    #[error("no overlap between b-file indices and locally generated values")]
    EmptyOverlap,

    /// Unknown verification suite name.
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    /// Unknown function family spec.
    #[error("unknown family `{0}` (expected monomial:M, exp, log1p or power:ALPHA)")]
    UnknownFamily(String),

    /// Unknown OEIS sequence id.
    #[error("unsupported sequence `{0}` (expected A001498 or A000806)")]
    UnknownSequence(String),

    /// Malformed fault-injection spec.
    #[error("bad fault spec `{0}` (expected bessel:N,K or rewrite:N,XPOW,IPOW)")]
    BadFaultSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
