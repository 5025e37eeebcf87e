use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A subset, element, or parameter refers outside the ground set, or an
    /// operation's precondition fails.
    #[error("domain error: {0}")]
    Domain(String),

    /// The ground set, search space, or enumeration exceeds a configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A structural precondition on a candidate object fails (overlapping
    /// parts, bad coverage) before any matroid query is made.
    #[error("structural error: {0}")]
    Structural(String),

    /// The matroid is not 3-connected; carries a violating separation side
    /// rendered as labels.
    #[error("not 3-connected: separation side {0:?} has connectivity {1}")]
    NotThreeConnected(Vec<String>, u32),

    /// Input documents that do not parse or do not define a matroid.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
