use thiserror::Error;

/// Errors raised by the constructions, checkers and file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {0} paired with itself")]
    SelfPair(usize),

    #[error("empty vertex subset")]
    EmptySubset,

    #[error("duplicate element {0}")]
    Duplicate(usize),

    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("bit string has length {found}, expected C({n},2) = {expected}")]
    BitLength { n: usize, expected: usize, found: usize },

    #[error("round {index} has n = {found}, family has n = {expected}")]
    InconsistentN {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("enumeration guard exceeded: {0} (override to force)")]
    GuardExceeded(String),

    #[error("resample limit {limit} exhausted; stuck on subset {stuck:?}")]
    ResampleLimit { limit: u64, stuck: Vec<usize> },

    #[error("no {k}-independent family found with t = {t} after {retries} attempts")]
    RetriesExhausted { k: usize, t: usize, retries: u32 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
