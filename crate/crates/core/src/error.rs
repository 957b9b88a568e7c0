use thiserror::Error;

use crate::enumerate::SummationSeries;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element has {got} coordinates, group has {expected} invariant factors")]
    ElementLength { expected: usize, got: usize },
    #[error("coordinate {index} = {value} out of range for cyclic factor of order {modulus}")]
    CoordinateOutOfRange {
        index: usize,
        value: u64,
        modulus: u64,
    },
    #[error("invalid group literal {0:?}")]
    GroupLiteral(String),
    #[error("group of order {order} exceeds the limit {limit} for {what}")]
    GroupTooLarge {
        order: u64,
        limit: u64,
        what: &'static str,
    },
    #[error("generators are not elements of the ambient group")]
    NotASubgroup,
    #[error("degree oracle has no entry for d = {0}")]
    MissingOracleEntry(u64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of machine range")]
    ModulusTooLarge(u128),
    #[error("{n} is not a unit modulo {modulus}")]
    NotAUnit { n: i64, modulus: u64 },
    #[error("character does not surject onto the group")]
    NotSurjective,
    #[error("{what} is not integral: {numerator}/{denominator}")]
    NonIntegral {
        what: &'static str,
        numerator: u64,
        denominator: u64,
    },
    #[error("invalid local condition: {0}")]
    InvalidCondition(String),
    #[error("bound {bound} exceeds configured maximum {max}")]
    BoundTooLarge { bound: u64, max: u64 },
    #[error("the trivial group has no G-extensions to enumerate")]
    TrivialGroup,
    #[error("resource limit exceeded ({reason}); checkpoints completed up to {}", .partial.completed_bound)]
    ResourceLimit {
        reason: String,
        partial: Box<SummationSeries>,
    },
    #[error("fit needs at least 4 checkpoints spanning 2 decades, got {count} spanning {span:.2} decades")]
    InsufficientCheckpoints { count: usize, span: f64 },
    #[error("{0} is not a negative fundamental discriminant")]
    InvalidDiscriminant(i64),
    #[error("prime {0} is excluded for this group")]
    PrimeExcluded(u64),
    #[error("8 divides the exponent: the unit classes locally e-th powers almost everywhere are not computed")]
    UnsupportedShaOmega,
    #[error("Euler product truncation {0} is too small")]
    TruncationTooSmall(u64),
    #[error("{q} divides the data of the subgroup or dual element")]
    BadPrime { q: u64 },
    #[error("dual element has {got} components, group has {expected} invariant factors")]
    DualLength { expected: usize, got: usize },
    #[error("arithmetic check failed: {0}")]
    CheckFailed(String),
    #[error("sieve cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
