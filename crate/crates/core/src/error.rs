//! Error type shared by all diagram operations.

use thiserror::Error;

/// Errors raised by graph and diagram operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition (unknown node,
    /// bad order, out-of-range outcome, mismatched dimensions, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The diagram's structure forbids the requested operation
    /// (directed cycle, non-reversible arc, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// A configured resource cap was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// An internal invariant failed after an operation. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
