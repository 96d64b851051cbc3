use thiserror::Error;

use crate::kernel::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // design / array files
    #[error("malformed header at line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("point count mismatch at line {line}: header declares {declared}, found {found}")]
    PointCountMismatch {
        line: usize,
        declared: usize,
        found: usize,
    },
    #[error("non-finite number at line {line}: {token}")]
    NonFinite { line: usize, token: String },
    #[error("zero denominator at line {line}: {token}")]
    ZeroDenominator { line: usize, token: String },
    #[error("bad number at line {line}: {token}")]
    BadNumber { line: usize, token: String },
    #[error("bad row at line {line}: {reason}")]
    BadRow { line: usize, reason: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    // point-set invariants
    #[error("invalid point set: {0}")]
    InvalidSet(String),
    #[error("value has no exact design-file representation: {0}")]
    NotRepresentable(String),
    #[error("cannot add values with different pi gradings ({left} vs {right})")]
    GradingMismatch { left: i32, right: i32 },

    // quad1d
    #[error("Hankel matrix of moments is not positive definite (failed at order {order})")]
    HankelNotPD { order: usize },
    #[error("need at least {needed} moments, got {got}")]
    TooFewMoments { needed: usize, got: usize },
    #[error("search failed: no unweighted {q}-point Gaussian {t}-design found after {restarts} restarts")]
    NoSolution { t: u32, q: usize, restarts: usize },

    // ffield
    #[error("field of order {0} is not supported (primes and q in {{4,8,9,16,25,27}} only)")]
    FieldUnsupported(u32),
    #[error("no r <= {max_r} yields {d} t-wise independent vectors over F_{q}")]
    GiveUp { q: u32, d: usize, max_r: u32 },
    #[error("strength must be even, got {0}")]
    OddT(u32),

    // transfer
    #[error("input is not a {measure} {t}-design (worst residual {residual:e})")]
    NotADesign {
        measure: String,
        t: u32,
        residual: f64,
    },
    #[error("point {index} is at the origin and cannot be normalized")]
    OriginPoint { index: usize },
    #[error("bad target dimension {k} for a {d}-dimensional set")]
    BadDimension { k: usize, d: usize },

    // builders
    #[error("weight fit failed: residual {residual:e} exceeds {tolerance:e}")]
    FitFailed { residual: f64, tolerance: f64 },
    #[error("pruning stalled at support size {support} (moment drift {drift:e})")]
    PruneStall { support: usize, drift: f64 },
    #[error("orbit needs {t} nonzero slots but dimension is {d}")]
    TooManyParts { t: usize, d: usize },
    #[error("generator matrix stayed singular after {0} resamples")]
    SingularAfterRetries(usize),
    #[error("unsupported strength: {0}")]
    BadStrength(String),

    // gegenbauer
    #[error("Gegenbauer polynomials Q_k^d need d >= 3, got d = {0}")]
    DimensionTooSmall(usize),
    #[error("LP condition violated: {0}")]
    ConditionViolated(String),

    // approx
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("no acceptable sample after {0} attempts")]
    RetriesExhausted(usize),
    #[error("brute-force tensor has {entries} entries (limit {limit})")]
    TooLarge { entries: u128, limit: u128 },

    // verify
    #[error("exact verification unsupported: {0}")]
    ExactUnsupported(String),
    #[error("monomial {0} out of range")]
    BadMonomial(MultiIndex),
}
