use std::fmt;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Matrix/vector position used in error messages (1-based when displayed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos(pub usize, pub usize);

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0 + 1, self.1 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("instance must have at least one row and one column, got {rows}x{cols}")]
    EmptyInstance { rows: usize, cols: usize },

    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{what} {index} is negative ({value})")]
    Negative {
        what: &'static str,
        index: usize,
        value: Rational,
    },

    #[error("instance is unbalanced: total supply {supply} != total demand {demand}")]
    Unbalanced { supply: Rational, demand: Rational },

    #[error("cell {} is outside the {rows}x{cols} instance", Pos(*row, *col))]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("plan quantity at {} must be positive, got {value}", Pos(*row, *col))]
    NonPositiveQuantity {
        row: usize,
        col: usize,
        value: Rational,
    },

    #[error("plan is infeasible: {0}")]
    InfeasiblePlan(String),

    #[error("plan support contains a cycle through cell {}, it is not a basic solution", Pos(*row, *col))]
    CyclicSupport { row: usize, col: usize },

    #[error("plan support is disconnected ({components} components); supply degenerate basic cells as hints")]
    DegenerateSupport { components: usize },

    #[error("{what} must be integral, got {value}")]
    NonIntegral { what: &'static str, value: Rational },

    #[error("{what} must be sorted nondecreasing (index {index} breaks the order)")]
    Unsorted { what: &'static str, index: usize },

    #[error("marginals must each sum to one: row total {rows}, column total {cols}")]
    BadMarginals { rows: Rational, cols: Rational },

    #[error("line cover misses zero entry at {}", Pos(*row, *col))]
    InvalidCover { row: usize, col: usize },

    #[error("cover weight {weight} is not minimal (maximum flow is {max_flow})")]
    NonMinimalCover { weight: u64, max_flow: u64 },

    #[error("cover weight already equals eta = {eta}; nothing to adjust")]
    CoverComplete { eta: u64 },

    #[error("every entry is covered, no delta can be chosen")]
    NoUncoveredEntry,

    #[error("reduced matrix has a negative entry at {}", Pos(*row, *col))]
    NegativeEntry { row: usize, col: usize },

    #[error("zero-entry flow carries {flow}, need eta = {eta}")]
    FlowShort { flow: Rational, eta: Rational },

    #[error("{what} is too large: {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{0}")]
    InvalidPermutation(String),
}
