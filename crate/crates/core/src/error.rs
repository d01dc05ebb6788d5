use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} is not supported (q must be at most 16)")]
    UnsupportedOrder(u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("element code {code} is out of range for F_{q}")]
    InvalidElement { q: u32, code: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(String, String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("no {t}-cover of dimension at most {max_dim}")]
    NoCoverWithinBound { t: usize, max_dim: usize },
    #[error("families are not a maximal cross-intersecting pair: {0}")]
    NotMaximal(String),
    #[error("no push-up witness found: {0}")]
    NoWitness(String),
    #[error("grid is empty after hypothesis filtering: {0}")]
    InfeasibleGrid(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unknown claim: {0}")]
    UnknownClaim(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
    #[error("record certificate does not re-verify: {0}")]
    CertificateMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
