use crate::poset::Vertex;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobwebError {
    #[error("labels start at 1; 0 is not a valid label")]
    ZeroLabel,

    #[error("levels start at 1; 0 is not a valid level")]
    ZeroLevel,

    #[error("row {row} is out of range for level {level} (level holds {size} vertices)")]
    RowOutOfRange { row: u64, level: u32, size: u64 },

    #[error("label {label} lies outside the truncation (labels 1..={last})")]
    LabelOutsideTruncation { label: u64, last: u64 },

    #[error("vertex {vertex} lies outside the truncation (max level {max_level})")]
    VertexOutsideTruncation { vertex: Vertex, max_level: u32 },

    #[error("{required} elements exceed the configured element limit of {limit}")]
    ElementLimit { required: u64, limit: u64 },

    #[error("a Hasse diagram needs at least two levels; got {0}")]
    TooFewLevels(u32),

    #[error("operands live on different truncations ({left} vs {right} levels)")]
    PosetMismatch { left: u32, right: u32 },

    #[error("cannot invert: zero diagonal entry at vertex {vertex}")]
    SingularDiagonal { vertex: Vertex },

    #[error("unknown strategy `{0}` (expected explicit, recurrence or matrix_inverse)")]
    UnknownStrategy(String),

    #[error("strategies disagree: {left} and {right} produced different matrices")]
    StrategyMismatch { left: String, right: String },

    #[error("repetition count must be at least 1")]
    ZeroRepetitions,

    #[error("invalid rational literal `{0}` (expected `p` or `p/q`)")]
    BadScalar(String),

    #[error("nonzero value at {vertex} violates the declared support vertex {support}")]
    SupportViolation { vertex: Vertex, support: Vertex },

    #[error("malformed input: {0}")]
    MalformedInput(String),
}
