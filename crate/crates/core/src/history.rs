use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::{Error, Result};

/// A flip schedule on a chain of `n` sites: `word[i]` is the (1-based) site
/// flipped at time step `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    word: Vec<usize>,
}

impl History {
    /// Validates that `word` is a permutation of `1..=n` with `n >= 1`.
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::InvalidHistory("empty word".into()));
        }
        let mut seen = vec![false; n + 1];
        for &site in &word {
            if site == 0 || site > n {
                return Err(Error::InvalidHistory(format!(
                    "site {site} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[site], true) {
                return Err(Error::InvalidHistory(format!("site {site} repeated")));
            }
        }
        Ok(History { word })
    }

    /// The identity schedule `1, 2, ..., n`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "a chain has at least one site");
        History {
            word: (1..=n).collect(),
        }
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Self {
        debug_assert!(History::new(word.clone()).is_ok());
        History { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Always false; a history has at least one site.
    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn into_word(self) -> Vec<usize> {
        self.word
    }

    /// Number of kinks created after the initial one.
    pub fn kink_count(&self) -> usize {
        kink_count_of(&self.word)
    }

    /// The mirrored history, flipping site `n + 1 - s` wherever this one flips `s`.
    pub fn reflected(&self) -> History {
        let n = self.len();
        History {
            word: self.word.iter().map(|&s| n + 1 - s).collect(),
        }
    }

    /// The generating-tree label of this history.
    pub fn vec_label(&self) -> Result<KinkLabel> {
        let n = self.len();
        if n < 2 {
            return Err(Error::out_of_range("n", n, "vec_label needs n >= 2"));
        }
        let pos_of = |value: usize| self.word.iter().position(|&s| s == value).unwrap();
        let max_pos = pos_of(n);
        let second_pos = pos_of(n - 1);
        Ok(KinkLabel {
            max_pos: max_pos + 1,
            kinks: self.kink_count(),
            top_inverted: max_pos < second_pos,
        })
    }
}

impl fmt::Display for History {
    /// Digits run together for `n <= 9`, comma separated above.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() <= 9 { "" } else { "," };
        for (i, site) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{site}")?;
        }
        Ok(())
    }
}

/// Kink statistic of a permutation word. The caller guarantees the word is a
/// permutation of `1..=n`.
pub(crate) fn kink_count_of(word: &[usize]) -> usize {
    let n = word.len();
    // padded so sites 0 and n + 1 read as never flipped
    let mut flipped = [false; 66];
    let mut heap;
    let flipped: &mut [bool] = if n + 2 <= flipped.len() {
        &mut flipped[..n + 2]
    } else {
        heap = vec![false; n + 2];
        &mut heap
    };
    let mut kinks = 0;
    for (step, &site) in word.iter().enumerate() {
        if step > 0 && !flipped[site - 1] && !flipped[site + 1] {
            kinks += 1;
        }
        flipped[site] = true;
    }
    kinks
}

/// The label `(j, k, r)` attached to a history in the generating tree:
/// position of the maximum, kink statistic, and whether the maximum is
/// flipped before the second largest site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KinkLabel {
    /// 1-based position of `n` in the word.
    pub max_pos: usize,
    pub kinks: usize,
    /// `pos(n) < pos(n - 1)`.
    pub top_inverted: bool,
}

impl KinkLabel {
    pub fn new(max_pos: usize, kinks: usize, top_inverted: bool) -> Self {
        KinkLabel {
            max_pos,
            kinks,
            top_inverted,
        }
    }

    /// The flag as the 0/1 integer used in the tree notation.
    pub fn flag(&self) -> u8 {
        u8::from(self.top_inverted)
    }
}

impl fmt::Display for KinkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.max_pos, self.kinks, self.flag())
    }
}

/// Largest kink statistic realised on a chain of `n` sites: `(n - 1) / 2`.
///
/// Kink-creating sites (the initial one included) are pairwise
/// non-adjacent, so at most `ceil(n / 2)` of them fit.
pub fn max_kinks(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// Coupling constant of the chain, in abstract energy units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    coupling: f64,
}

impl EnergyParams {
    pub fn new(coupling: f64) -> Result<Self> {
        if coupling.is_finite() && coupling > 0.0 {
            Ok(EnergyParams { coupling })
        } else {
            Err(Error::InvalidCoupling(coupling))
        }
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }
}

/// Energy paid by a history that creates `d` kinks beyond the initial one.
pub fn energy(d: usize, params: EnergyParams) -> f64 {
    4.0 * params.coupling * (d as f64 + 1.0)
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}
