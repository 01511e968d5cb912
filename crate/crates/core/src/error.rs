use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root of unity order must be positive")]
    ZeroOrder,

    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),

    #[error("invalid recurrence ({n}, {m1}, {m2}, {k}): {reason}")]
    InvalidRecurrence {
        n: i64,
        m1: i64,
        m2: i64,
        k: i64,
        reason: &'static str,
    },

    #[error("witness enumeration requires even n, got {0}")]
    OddOrder(usize),

    #[error("diagonal index {j} out of range [1, {max}]")]
    DiagonalIndex { j: usize, max: usize },

    #[error(
        "ratio comparison for n={n} at ({k}, {l}, {k_prime}, {l_prime}) fell in the uncertified band ({gap:e}); manual review needed"
    )]
    CertificationGap {
        n: usize,
        k: usize,
        l: usize,
        k_prime: usize,
        l_prime: usize,
        gap: f64,
    },

    #[error("ratio w must be nonzero")]
    ZeroRatio,

    #[error("zero set {zero_set:?} matches none of the terminal cases")]
    UnmatchedZeroSet { zero_set: Vec<usize> },

    #[error("basis polygon v_{t} leaves recurrence residual {residual:e}")]
    ResidualCheckFailed { t: usize, residual: f64 },

    #[error("sweep requires n_max >= 4, got {0}")]
    SweepRange(usize),

    #[error("invalid frequency set: {0}")]
    InvalidFrequencies(String),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid document: {0}")]
    InvalidDocument(String),
}
