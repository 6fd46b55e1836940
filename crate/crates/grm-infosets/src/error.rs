use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u64 },

    #[error("operands belong to different fields (degrees {a} and {b})")]
    FieldMismatch { a: usize, b: usize },

    #[error("{n} is not prime")]
    NotPrime { n: u64 },

    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },

    #[error("modulus polynomial is invalid: {reason}")]
    BadModulus { reason: String },

    #[error("power basis is singular over the base field; extension construction is broken")]
    BasisSingular,

    #[error("gcd({a}, {b}) != 1")]
    NotCoprime { a: u64, b: u64 },

    #[error("order {rho} outside (0, {max}] for these parameters")]
    BadOrder { rho: u64, max: u64 },

    #[error("invalid decomposition: {reason}")]
    BadDecomposition { reason: String },

    #[error("second-order construction does not apply: {reason}")]
    NotApplicable { reason: String },

    #[error("M({u}) = {num}/{den} is not an integer")]
    NonIntegralM { u: u64, num: u64, den: u64 },

    #[error("|Gamma| = {gamma} but the defining set has {dstar} elements")]
    SizeMismatch { gamma: u64, dstar: u64 },

    #[error("internal contradiction: {reason}")]
    InternalContradiction { reason: String },

    #[error("field size {size} exceeds the verification bound {bound}")]
    TooLarge { size: u64, bound: u64 },

    #[error("generator matrix rank {found} differs from expected dimension {expected}")]
    RankAnomaly { found: usize, expected: usize },

    #[error("position set has size {found}, dimension is {expected}")]
    DimensionMismatch { found: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("verification failed for {role}: rank {rank} < {expected}")]
    VerificationFailed {
        role: String,
        rank: usize,
        expected: usize,
    },

    #[error("table mismatch: {0}")]
    TableMismatch(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
