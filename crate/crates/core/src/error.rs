use thiserror::Error;

/// Errors raised by the exact lattice and tiling routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("generators do not span a full-rank lattice in dimension {dim}")]
    RankDeficient { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("point is not a dual point of the lattice")]
    NotDual,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("duplicate translate at positions {first} and {second}")]
    DuplicateTranslate { first: usize, second: usize },

    #[error("tiling instance has no translates")]
    EmptyInstance,

    #[error("period box of {volume} points exceeds the cap of {cap}")]
    BoxTooLarge { volume: u128, cap: u64 },

    #[error("subset enumeration of {needed} candidates exceeds the budget of {budget}")]
    SubsetBudget { needed: u128, budget: u64 },

    #[error("refinement does not tile the chosen coset")]
    BadRefinement,

    #[error("index {index} out of range for {len} translates")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("integer {0} does not fit in a machine word")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
