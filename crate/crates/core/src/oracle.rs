//! Ground truth by enumeration.
//!
//! [`brute_force_table`] classifies every permutation of `1..=n` with
//! [`History::kink_count`]. [`enumerate_histories`] and [`backtrack_count`]
//! instead replay the flip process: each step either extends an existing
//! block of flipped sites or opens a new block, which spends one kink credit.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::history::{kink_count_of, max_kinks};
use crate::{CountTable, Error, History, Result};

/// Largest `n_max` accepted by [`brute_force_table`] unless overridden.
pub const BRUTE_FORCE_CEILING: usize = 11;

/// Exhaustive table for `1 <= n <= n_max`, guarded by [`BRUTE_FORCE_CEILING`].
pub fn brute_force_table(n_max: usize) -> Result<CountTable> {
    brute_force_table_with_ceiling(n_max, BRUTE_FORCE_CEILING)
}

pub fn brute_force_table_with_ceiling(n_max: usize, ceiling: usize) -> Result<CountTable> {
    // u64 tallies stay exact up to 20!
    let hard_limit = ceiling.min(20);
    if n_max == 0 || n_max > hard_limit {
        return Err(Error::out_of_range(
            "n_max",
            n_max,
            format!("1..={hard_limit} for brute force"),
        ));
    }
    let mut table = CountTable::new();
    for n in 1..=n_max {
        table.insert_row(
            n,
            brute_force_row(n).into_iter().map(BigUint::from).collect(),
        );
    }
    Ok(table)
}

/// Tallies for one chain length; the scan is split by the first letter.
fn brute_force_row(n: usize) -> Vec<u64> {
    let width = max_kinks(n) + 1;
    (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut tally = vec![0u64; width];
            let mut word: Vec<usize> = std::iter::once(first)
                .chain((1..=n).filter(|&s| s != first))
                .collect();
            loop {
                tally[kink_count_of(&word)] += 1;
                if !next_permutation(&mut word[1..]) {
                    break;
                }
            }
            tally
        })
        .reduce(
            || vec![0u64; width],
            |mut acc, part| {
                acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                acc
            },
        )
}

/// Advances to the lexicographically next arrangement; false after the last.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn check_kinks(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("n", n, "n >= 1"));
    }
    if d > max_kinks(n) {
        return Err(Error::out_of_range(
            "d",
            d,
            format!("0..={} for n = {n}", max_kinks(n)),
        ));
    }
    Ok(())
}

/// Flipped sites with sentinels at 0 and n + 1 that stay unflipped.
#[derive(Debug, Clone)]
struct Chain {
    flipped: Vec<bool>,
}

impl Chain {
    fn new(n: usize) -> Self {
        Chain {
            flipped: vec![false; n + 2],
        }
    }

    fn n(&self) -> usize {
        self.flipped.len() - 2
    }

    fn touches_block(&self, site: usize) -> bool {
        self.flipped[site - 1] || self.flipped[site + 1]
    }

    /// Most new blocks that can still be opened, not counting the initial
    /// flip when nothing is flipped yet.
    fn kink_capacity(&self) -> usize {
        let n = self.n();
        let mut capacity = 0;
        let mut any_flipped = false;
        let mut site = 1;
        while site <= n {
            if self.flipped[site] {
                any_flipped = true;
                site += 1;
                continue;
            }
            let start = site;
            while site <= n && !self.flipped[site] {
                site += 1;
            }
            let end = site - 1;
            // usable sites keep distance >= 2 from flipped neighbours
            let mut usable = end - start + 1;
            if start > 1 {
                usable = usable.saturating_sub(1);
            }
            if end < n {
                usable = usable.saturating_sub(1);
            }
            capacity += usable.div_ceil(2);
        }
        if any_flipped {
            capacity
        } else {
            n.div_ceil(2) - 1
        }
    }
}

/// Lazily yields the histories with exactly `d` kinks in lexicographic order.
#[derive(Debug, Clone)]
pub struct Histories {
    chain: Chain,
    word: Vec<usize>,
    credits: usize,
    /// Next candidate site to try at each depth.
    cursor: Vec<usize>,
    remaining: Option<usize>,
    done: bool,
}

impl Histories {
    fn new(n: usize, d: usize, limit: Option<usize>) -> Self {
        Histories {
            chain: Chain::new(n),
            word: Vec::with_capacity(n),
            credits: d,
            cursor: vec![1],
            remaining: limit,
            done: limit == Some(0),
        }
    }

    /// Credit cost of flipping `site` next, or `None` if the move leads to a
    /// dead end.
    fn move_cost(&mut self, site: usize) -> Option<usize> {
        if self.chain.flipped[site] {
            return None;
        }
        let cost = usize::from(!self.word.is_empty() && !self.chain.touches_block(site));
        if cost > self.credits {
            return None;
        }
        self.chain.flipped[site] = true;
        let feasible = self.credits - cost <= self.chain.kink_capacity();
        self.chain.flipped[site] = false;
        feasible.then_some(cost)
    }

    fn pop(&mut self) {
        let site = self.word.pop().unwrap();
        self.chain.flipped[site] = false;
        let opened = !self.word.is_empty() && !self.chain.touches_block(site);
        self.credits += usize::from(opened);
        self.cursor.pop();
    }
}

impl Iterator for Histories {
    type Item = History;

    fn next(&mut self) -> Option<History> {
        let n = self.chain.n();
        while !self.done {
            let depth = self.word.len();
            let start = self.cursor[depth];
            let next_move = (start..=n).find_map(|s| self.move_cost(s).map(|c| (s, c)));
            match next_move {
                Some((site, cost)) => {
                    self.cursor[depth] = site + 1;
                    self.credits -= cost;
                    self.chain.flipped[site] = true;
                    self.word.push(site);
                    self.cursor.push(1);
                    if self.word.len() == n {
                        let out = History::from_word_unchecked(self.word.clone());
                        self.pop();
                        if let Some(left) = self.remaining.as_mut() {
                            *left -= 1;
                            self.done = *left == 0;
                        }
                        return Some(out);
                    }
                }
                None if depth == 0 => self.done = true,
                None => self.pop(),
            }
        }
        None
    }
}

/// Streams the histories of a chain of `n` sites with kink statistic `d`,
/// in lexicographic order, stopping after `limit` words if given.
pub fn enumerate_histories(n: usize, d: usize, limit: Option<usize>) -> Result<Histories> {
    check_kinks(n, d)?;
    Ok(Histories::new(n, d, limit))
}

/// Number of histories [`enumerate_histories`] would emit, by memoised
/// backtracking over the set of flipped sites.
pub fn backtrack_count(n: usize, d: usize) -> Result<BigUint> {
    check_kinks(n, d)?;
    if n > 64 {
        return Err(Error::out_of_range("n", n, "n <= 64 for backtracking"));
    }
    let mut memo = HashMap::new();
    let mut total = BigUint::zero();
    for first in 1..=n {
        total += count_from(n, 1u64 << (first - 1), d, &mut memo);
    }
    Ok(total)
}

fn count_from(
    n: usize,
    mask: u64,
    credits: usize,
    memo: &mut HashMap<(u64, usize), BigUint>,
) -> BigUint {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if mask == full {
        return if credits == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    if let Some(hit) = memo.get(&(mask, credits)) {
        return hit.clone();
    }
    let mut total = BigUint::zero();
    for site in 0..n {
        if mask >> site & 1 == 1 {
            continue;
        }
        let left = site > 0 && mask >> (site - 1) & 1 == 1;
        let right = site + 1 < n && mask >> (site + 1) & 1 == 1;
        if left || right {
            total += count_from(n, mask | 1 << site, credits, memo);
        } else if credits > 0 {
            total += count_from(n, mask | 1 << site, credits - 1, memo);
        }
    }
    memo.insert((mask, credits), total.clone());
    total
}
