use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::history::{factorial, max_kinks};

/// Exact counts `#F(n, d)`, one dense row per chain length `n`.
///
/// Row `n` holds `d = 0..=max_kinks(n)` when complete. Series expansions at a
/// low `v`-order produce truncated rows; [`CountTable::is_complete`] tells
/// them apart.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    rows: BTreeMap<usize, Vec<BigUint>>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_row(&mut self, n: usize, row: Vec<BigUint>) {
        assert!(n >= 1, "chain length starts at 1");
        assert!(
            row.len() <= max_kinks(n) + 1,
            "row {n} has {} entries, at most {} allowed",
            row.len(),
            max_kinks(n) + 1
        );
        self.rows.insert(n, row);
    }

    pub fn row(&self, n: usize) -> Option<&[BigUint]> {
        self.rows.get(&n).map(Vec::as_slice)
    }

    /// Entry `(n, d)`; `None` when the row is missing or truncated before `d`.
    pub fn get(&self, n: usize, d: usize) -> Option<&BigUint> {
        self.rows.get(&n).and_then(|row| row.get(d))
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &[BigUint])> {
        self.rows.iter().map(|(&n, row)| (n, row.as_slice()))
    }

    pub fn min_n(&self) -> Option<usize> {
        self.rows.keys().next().copied()
    }

    pub fn max_n(&self) -> Option<usize> {
        self.rows.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Total number of `(n, d)` entries.
    pub fn entry_count(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }

    pub fn is_complete(&self, n: usize) -> bool {
        self.row(n).is_some_and(|row| row.len() == max_kinks(n) + 1)
    }

    /// Column `d` over all rows that reach it.
    pub fn column(&self, d: usize) -> impl Iterator<Item = (usize, &BigUint)> {
        self.rows
            .iter()
            .filter_map(move |(&n, row)| row.get(d).map(|c| (n, c)))
    }

    /// Rows with `lo <= n <= hi`.
    pub fn restrict(&self, lo: usize, hi: usize) -> CountTable {
        CountTable {
            rows: self
                .rows
                .range(lo..=hi.max(lo))
                .filter(|(&n, _)| n <= hi)
                .map(|(&n, row)| (n, row.clone()))
                .collect(),
        }
    }

    pub fn row_sum(&self, n: usize) -> Option<BigUint> {
        self.row(n).map(|row| row.iter().sum())
    }

    /// Checks every complete row: sum equals `n!` and the top entry is
    /// positive. Returns the first offending `n`.
    pub fn check_partition(&self) -> Result<(), usize> {
        for (&n, row) in &self.rows {
            if row.len() != max_kinks(n) + 1 {
                continue;
            }
            let sum: BigUint = row.iter().sum();
            if sum != factorial(n) || row.last().is_none_or(Zero::is_zero) {
                return Err(n);
            }
        }
        Ok(())
    }
}
