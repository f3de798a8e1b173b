//! Level-by-level counting over the generating tree of histories.
//!
//! Every history of length `n + 1` arises from exactly one history of length
//! `n` by inserting the new maximum `n + 1` somewhere in its word. The label
//! [`KinkLabel`] of the child depends only on the parent's label and the
//! insertion point, so counting labels per level is enough.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::history::max_kinks;
use crate::{CountTable, Error, History, KinkLabel, Result};

/// Ordered child labels of a node with label `label` at level `n`.
///
/// Inserting the new maximum at position `m <= max_pos` puts it before the
/// old maximum: it becomes a fresh kink, and when the old maximum was
/// itself a kink (`top_inverted`) that kink is absorbed. Positions past the
/// old maximum extend its block for free.
pub fn succession_children(label: KinkLabel, n: usize) -> Result<Vec<KinkLabel>> {
    if n < 2 || label.max_pos == 0 || label.max_pos > n || label.kinks > max_kinks(n) {
        return Err(Error::MalformedLabel {
            label: label.to_string(),
            level: n,
        });
    }
    let j = label.max_pos;
    let before = if label.top_inverted {
        label.kinks
    } else {
        label.kinks + 1
    };
    Ok((1..=j)
        .map(|m| KinkLabel::new(m, before, true))
        .chain((j + 1..=n + 1).map(|m| KinkLabel::new(m, label.kinks, false)))
        .collect())
}

/// Number of tree nodes per label `(j, k, r)` at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelState {
    n: usize,
    /// k-band width, `n / 2 + 1`; the top band past `max_kinks(n)` stays zero.
    width: usize,
    /// Indexed by `((j - 1) * width + k) * 2 + r`.
    cells: Vec<BigUint>,
}

impl LevelState {
    /// Level 2: the words `12` with label `(2,0,0)` and `21` with `(1,0,1)`.
    pub fn root() -> Self {
        let mut state = LevelState::zeroed(2);
        *state.cell_mut(2, 0, false) = 1u32.into();
        *state.cell_mut(1, 0, true) = 1u32.into();
        state
    }

    fn zeroed(n: usize) -> Self {
        let width = n / 2 + 1;
        LevelState {
            n,
            width,
            cells: vec![BigUint::zero(); n * width * 2],
        }
    }

    fn index(&self, j: usize, k: usize, r: bool) -> usize {
        ((j - 1) * self.width + k) * 2 + usize::from(r)
    }

    fn cell_mut(&mut self, j: usize, k: usize, r: bool) -> &mut BigUint {
        let i = self.index(j, k, r);
        &mut self.cells[i]
    }

    pub fn level(&self) -> usize {
        self.n
    }

    /// Count for label `(j, k, r)`; zero outside the stored range.
    pub fn count(&self, label: KinkLabel) -> BigUint {
        if label.max_pos == 0 || label.max_pos > self.n || label.kinks >= self.width {
            return BigUint::zero();
        }
        self.cells[self.index(label.max_pos, label.kinks, label.top_inverted)].clone()
    }

    pub fn total(&self) -> BigUint {
        self.cells.iter().sum()
    }

    /// Row `n` of the count table: totals per kink statistic.
    pub fn kink_marginals(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.width];
        for j in 1..=self.n {
            for (k, slot) in out.iter_mut().enumerate() {
                *slot += &self.cells[self.index(j, k, false)];
                *slot += &self.cells[self.index(j, k, true)];
            }
        }
        let top = max_kinks(self.n);
        assert!(
            out[top + 1..].iter().all(Zero::is_zero),
            "kink band above {top} is populated at level {}",
            self.n
        );
        out.truncate(top + 1);
        out
    }

    /// The next level, via prefix sums over `j` (free insertions after the
    /// maximum) and suffix sums (insertions before it).
    pub fn advance(&self) -> LevelState {
        let n = self.n;
        let mut next = LevelState::zeroed(n + 1);
        for k in 0..self.width {
            let mut prefix = BigUint::zero();
            for m in 1..=n + 1 {
                *next.cell_mut(m, k, false) = prefix.clone();
                if m <= n {
                    prefix += &self.cells[self.index(m, k, false)];
                    prefix += &self.cells[self.index(m, k, true)];
                }
            }
        }
        for k in 0..next.width {
            let mut suffix = BigUint::zero();
            for m in (1..=n).rev() {
                if k >= 1 && k - 1 < self.width {
                    suffix += &self.cells[self.index(m, k - 1, false)];
                }
                if k < self.width {
                    suffix += &self.cells[self.index(m, k, true)];
                }
                *next.cell_mut(m, k, true) = suffix.clone();
            }
        }
        next
    }
}

/// Successive levels `2, 3, ...` of the tree.
pub fn levels() -> impl Iterator<Item = LevelState> {
    std::iter::successors(Some(LevelState::root()), |s| Some(s.advance()))
}

/// Exact counts for `1 <= n <= n_max`. Row 1 is the single-site chain.
pub fn dp_table(n_max: usize) -> CountTable {
    let mut table = CountTable::new();
    if n_max >= 1 {
        table.insert_row(1, vec![1u32.into()]);
    }
    for state in levels().take(n_max.saturating_sub(1)) {
        table.insert_row(state.level(), state.kink_marginals());
    }
    table
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMismatch {
    pub parent: History,
    /// 1-based insertion position of the new maximum.
    pub position: usize,
    pub predicted: KinkLabel,
    pub actual: KinkLabel,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub insertions_checked: usize,
    pub mismatches: Vec<LabelMismatch>,
}

impl ConsistencyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks, for every word of length `2..n_max` and every insertion point of
/// the new maximum, that the child's directly computed label is the one
/// [`succession_children`] predicts.
pub fn tree_label_consistency(n_max: usize) -> Result<ConsistencyReport> {
    if n_max > 8 {
        return Err(Error::out_of_range("n_max", n_max, "n_max <= 8"));
    }
    let mut report = ConsistencyReport::default();
    let mut words: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 1]];
    for n in 2..n_max {
        let mut children = Vec::with_capacity(words.len() * (n + 1));
        for word in &words {
            let parent = History::from_word_unchecked(word.clone());
            let predicted = succession_children(parent.vec_label()?, n)?;
            for (pos, &expected) in (1..=n + 1).zip(&predicted) {
                let mut child = word.clone();
                child.insert(pos - 1, n + 1);
                let actual = History::from_word_unchecked(child.clone()).vec_label()?;
                report.insertions_checked += 1;
                if actual != expected {
                    report.mismatches.push(LabelMismatch {
                        parent: parent.clone(),
                        position: pos,
                        predicted: expected,
                        actual,
                    });
                }
                children.push(child);
            }
        }
        words = children;
    }
    Ok(report)
}
