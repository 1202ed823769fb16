use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus not squarefree: {0}")]
    NotSquarefree(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("prime index {index} out of range for {m} primes")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("slot {slot} out of range for {vars} variables")]
    SlotOutOfRange { slot: usize, vars: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("arity {arity} above cap {cap}")]
    ArityAboveCap { arity: usize, cap: usize },
    #[error("resource guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("certificate replay failed: {0}")]
    Replay(String),
}

pub type Result<T> = std::result::Result<T, Error>;
