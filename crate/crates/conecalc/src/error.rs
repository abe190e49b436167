use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("the empty word has no primitive root")]
    EmptyWord,

    #[error("word of length {len} exceeds the brute-force limit {limit}")]
    TooLong { len: usize, limit: usize },

    #[error("word length {len} exceeds the DP length cap {cap}")]
    BudgetExceeded { len: usize, cap: usize },

    #[error("words do not share a generator skeleton")]
    SkeletonMismatch,

    #[error("cancellation witness does not verify: {0}")]
    InvalidWitness(String),

    #[error("norm certificate does not verify: {0}")]
    InvalidCertificate(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("irrational exponents are not supported; approximate by rationals first")]
    IrrationalExponent,

    #[error("operation not supported for this base group: {0}")]
    UnsupportedBase(String),

    #[error("invalid stable-length bracket: upper bound below lower bound")]
    InvalidBracket,

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    /// Exit status 2 signals a precondition or input problem, 1 an internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidCertificate(_) | Error::InvalidWitness(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
