use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),

    #[error("field size {q} exceeds the limit {limit}; pass --force to override")]
    FieldTooLarge { q: u64, limit: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("{0} requires odd characteristic")]
    CharacteristicTwo(&'static str),

    #[error("index {n} exceeds the limit {limit} for {method} evaluation")]
    IndexTooLarge {
        n: u64,
        limit: u64,
        method: &'static str,
    },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("i/o: {0}")]
    Io(String),
}
