use thiserror::Error;

/// Errors raised by the arrangement library and CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} is too large")]
    FieldTooLarge { p: u64, k: usize },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    Reducible(usize),
    #[error("cannot invert zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("operands live in different ambient spaces or rings")]
    SpaceMismatch,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {q} is not a power of the characteristic {p}")]
    CharacteristicMismatch { q: u64, p: u64 },
    #[error("subspace {index}: {reason}")]
    InvalidSubspace { index: usize, reason: String },
    #[error("subspaces {first} and {second} coincide")]
    DuplicateSubspace { first: usize, second: usize },
    #[error("subspace {0} does not pass through the origin")]
    NotCentral(usize),
    #[error("k-equal arrangement needs 2 <= k <= n, got n = {n}, k = {k}")]
    KEqualRange { n: usize, k: usize },
    #[error("{op} requires {expected} input")]
    WrongKind { op: &'static str, expected: &'static str },
    #[error("subset enumeration would exceed the cap of {cap} subsets")]
    SubsetCap { cap: u64 },
    #[error("enumerating {needed} points exceeds the cap of {cap}")]
    EnumerationCap { needed: String, cap: u64 },
    #[error("element index {0} is out of range or not allowed here")]
    BadElement(usize),
    #[error("invalid arrangement file: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
