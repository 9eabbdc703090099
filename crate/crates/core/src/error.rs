//! Error type shared by every module of the crate.

use crate::ring::Ring;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed textual input.
    Parse,
    /// An operation was called outside its domain.
    Precondition,
    /// A post-condition check on a computed result failed.
    Verification,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Ring, right: Ring },

    #[error("characteristic {0} is not prime; the coefficient ring must be an integral domain")]
    CompositeCharacteristic(u64),

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),

    #[error("{op} requires characteristic zero, got {ring}")]
    NeedsCharZero { op: &'static str, ring: Ring },

    #[error("{op} requires positive characteristic, got {ring}")]
    NeedsCharPositive { op: &'static str, ring: Ring },

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("degree cap mismatch: {0} vs {1}")]
    CapMismatch(u32, u32),

    #[error("monomial {0} does not divide {1}")]
    NotADivisor(String, String),

    #[error("highest common factor of an empty set")]
    EmptySet,

    #[error("operation undefined on the zero series")]
    ZeroSeries,

    #[error("component {0} has a nonzero constant term")]
    ConstantTerm(usize),

    #[error("map is not tangent to the identity")]
    NotTangent,

    #[error("linear part is not invertible over {0}")]
    NotInvertible(Ring),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("values do not define a sum-function over {ring}: coefficient {index} is {value}")]
    NotASumFunction { ring: Ring, index: usize, value: String },

    #[error("length {len} is not a power of {c}")]
    NotAPowerOf { len: usize, c: u64 },

    #[error("need at least {need} base-{c} digits for cap {cap}, got {have}")]
    InsufficientDigits { c: u64, cap: u32, need: usize, have: usize },

    #[error("maps do not commute")]
    NotCommuting,

    #[error("linear part has no finite order up to {0}")]
    NoFiniteOrder(u32),

    #[error("characteristic {c} divides the order {s}")]
    CharDividesOrder { c: u64, s: u32 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::VerificationFailed(_) => ErrorKind::Verification,
            _ => ErrorKind::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
