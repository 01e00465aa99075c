//! Error types for the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced when constructing or interrogating geometric data.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector had the wrong causal type for the requested operation
    /// (e.g. asked for the axis of a non-hyperbolic isometry, or a geodesic
    /// through a non-timelike normal).
    #[error("causal type mismatch: {0}")]
    CausalType(String),

    /// Input data failed a structural validation (ping-pong geodesics not
    /// disjoint, cell structure with a dangling edge, weights of the wrong
    /// length, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A ping-pong witness was required but the supplied geodesic pairs do
    /// not satisfy the side-separation conditions.
    #[error("not a ping-pong system: {0}")]
    NotPingPong(String),

    /// A numerical routine failed to reach its accuracy target (singular
    /// linear system, walk that does not terminate, kernel of unexpected
    /// dimension, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Disjointness of the constructed facets could not be certified.
    #[error("disjointness failure: {0}")]
    Disjointness(String),

    /// The requested feature is recognized but intentionally not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),
}
