use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An interval enclosure still straddles a decision boundary at the
    /// configured precision ceiling.
    #[error("precision exhausted at {bits} bits while resolving `{subexpr}`")]
    PrecisionExhausted { subexpr: String, bits: u32 },

    /// A construction grew past its configured cap.
    #[error("{what}: budget of {limit} exceeded")]
    BudgetExceeded { what: String, limit: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A witness search ran out of candidates.
    #[error("no witness: {0}")]
    NoWitness(String),

    /// A produced certificate failed its own re-check. Always a bug.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn budget(what: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
