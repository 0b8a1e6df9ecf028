//! Cartan matrix of the affine type `A_n^{(1)}`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Builds the `(n+1)×(n+1)` matrix from the cyclic adjacency rule. Requires `n ≥ 2`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Contract(format!("affine type A_n needs n >= 2, got {n}")));
        }
        let size = n + 1;
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if i == j {
                            2
                        } else {
                            let d = (i + size - j) % size;
                            if d == 1 || d == n {
                                -1
                            } else {
                                0
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(CartanMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<i64> {
        for idx in [i, j] {
            if idx > self.n {
                return Err(Error::IndexOutOfRange {
                    what: "cartan",
                    index: idx,
                    max: self.n,
                });
            }
        }
        Ok(self.entries[i][j])
    }

    /// Entry without a range check; panics on bad indices.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }
}
