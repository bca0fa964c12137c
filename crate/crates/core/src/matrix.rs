//! Pigeonhole collisions for integer matrices with fewer rows than columns:
//! positive vectors `x1 != x2` with `A x1 = A x2`.

use serde::Serialize;

use crate::collision::{self, SearchConfig, SearchOutcome};
use crate::error::WitnessError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    /// Row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, WitnessError> {
        if entries.len() != rows * cols {
            return Err(WitnessError::MatrixEntries { rows, cols, found: entries.len() });
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, WitnessError> {
        let cols = rows.first().map_or(0, Vec::len);
        let entries: Vec<i64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(WitnessError::MatrixEntries {
                rows: rows.len(),
                cols,
                found: entries.len(),
            });
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Exact product `A x`.
    pub fn apply(&self, x: &[u64]) -> Result<Vec<i128>, WitnessError> {
        if x.len() != self.cols {
            return Err(WitnessError::LengthMismatch { expected: self.cols, found: x.len() });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).try_fold(0i128, |acc, (&a, &v)| {
                    i128::from(a)
                        .checked_mul(i128::from(v))
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(WitnessError::Overflow)
                })
            })
            .collect()
    }
}

/// Searches `[1, k]^cols` for a collision of `x -> A x`.
pub fn matrix_collision(
    a: &IntegerMatrix,
    k: u64,
    config: &SearchConfig,
) -> Result<SearchOutcome<Vec<u64>>, WitnessError> {
    if a.rows >= a.cols {
        return Err(WitnessError::MatrixShape { rows: a.rows, cols: a.cols });
    }
    if k < 2 {
        return Err(WitnessError::LabelRange { k, min: 2 });
    }
    collision::search(a.cols, k, config, |x| a.apply(x))
}
