use thiserror::Error;

/// Errors surfaced by the library.
///
/// Validation of whole fixtures is report-based (see [`crate::algebra::ValidationReport`]);
/// this enum covers operations whose preconditions can fail on otherwise valid inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebras(String),

    #[error("invalid algebra:\n{0}")]
    InvalidAlgebra(String),

    #[error("invalid extension:\n{0}")]
    InvalidExtension(String),

    #[error("bimodule axiom violated: {0}")]
    InvalidBimodule(String),

    #[error("map does not intertwine the declared actions: {0}")]
    NotIntertwining(String),

    #[error("map is not multiplicative: {0}")]
    NotMultiplicative(String),

    #[error("subbimodule pair is not invertible: {0}")]
    NotInvertiblePair(String),

    #[error("balanced map is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid invertibility witnesses: {0}")]
    InvalidWitness(String),

    #[error("coherence identity failed (this indicates an internal bug): {0}")]
    CoherenceFailure(String),

    #[error("invalid group structure: {0}")]
    InvalidGroup(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
