use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} out of range (supported: 2..=64)")]
    ModulusOutOfRange(u32),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("residue {value} is not reduced modulo {modulus}")]
    ResidueOutOfRange { value: u32, modulus: u32 },
    #[error("dilation by non-unit {0}")]
    NonUnitDilation(u32),
    #[error("invalid weight pair: {0}")]
    InvalidWeights(String),
    #[error("empty sequence")]
    EmptySequence,
    #[error("subsequence length {length} exceeds sequence length {available}")]
    LengthExceedsSequence { length: usize, available: usize },
    #[error("invalid subsequence mode: {0}")]
    InvalidMode(String),
    #[error("search reached the length cap {cap} before the constant was decided")]
    CapExceeded { cap: usize },
    #[error("prime {0} is too small for this construction (needs p >= 7)")]
    PrimeTooSmall(u32),
    #[error("no solution found: {0}")]
    NoSolution(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("unsupported prime {prime} for {lemma}: {reason}")]
    UnsupportedPrime {
        lemma: String,
        prime: u32,
        reason: String,
    },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("checkpoint corrupt: {0}")]
    CheckpointCorrupt(String),
    #[error("checkpoint does not match the current search: {0}")]
    CheckpointMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
