use std::fmt;

use thiserror::Error;

/// Side of a biclique.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Malformed cover input. Biclique indices are stored 0-based and displayed
/// 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("n = {0} is too small: covers need at least 2 vertices")]
    TooFewVertices(usize),
    #[error("vertex {vertex} in biclique {} is outside [1, {n}]", .biclique + 1)]
    VertexOutOfRange { biclique: usize, vertex: usize, n: usize },
    #[error("empty {side} side in biclique {}", .biclique + 1)]
    EmptySide { biclique: usize, side: Side },
    #[error("left/right overlap in biclique {}", .biclique + 1)]
    Overlap { biclique: usize, vertex: usize },
    #[error("duplicate vertex {vertex} on the {side} side of biclique {}", .biclique + 1)]
    DuplicateVertex { biclique: usize, side: Side, vertex: usize },
    #[error("malformed cover JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("label range k must be at least {min}, got {k}")]
    LabelRange { k: u64, min: u64 },
    #[error("label {value} at position {} is outside [1, {k}]", .index + 1)]
    LabelOutOfRange { index: usize, value: u64, k: u64 },
    #[error("search budget must be at least 1")]
    ZeroBudget,
    #[error("the two labelings are identical")]
    IdenticalLabelings,
    #[error("the two labelings have different patterns (first difference at entry {})", .entry + 1)]
    PatternMismatch { entry: usize },
    #[error("matrix has {rows} rows and {cols} columns; need rows < cols")]
    MatrixShape { rows: usize, cols: usize },
    #[error("matrix entry count {found} does not match {rows}x{cols}")]
    MatrixEntries { rows: usize, cols: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error(
        "no witness found within budgets (collision budget {collision_budget}, kernel bound {kernel_bound})"
    )]
    Exhausted { collision_budget: u64, kernel_bound: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("size vectors have lengths {p} and {q}")]
    LengthMismatch { p: usize, q: usize },
    #[error("size vectors must have at least one part")]
    NoParts,
    #[error("part {} of {which} is empty", .index + 1)]
    EmptyPart { which: &'static str, index: usize },
    #[error("size totals differ: sum(p) = {p_total}, sum(q) = {q_total}")]
    UnequalTotals { p_total: u64, q_total: u64 },
    #[error("bijection needs 1 <= p <= q, got p = {p}, q = {q}")]
    BijectionRange { p: u64, q: u64 },
    #[error("biclique index {index} out of range for a cover with {len} bicliques")]
    BicliqueIndex { index: usize, len: usize },
    #[error("refutation rejected: m = {m} >= n - 1 = {}", .n - 1)]
    Rejected { m: usize, n: usize },
}
