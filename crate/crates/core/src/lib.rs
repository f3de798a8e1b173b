//! Exact counting of Ising-chain flip histories, stratified by the number of
//! kinks created along the way.
//!
//! A history of a chain with `n` sites is a permutation of `1..=n` read as a
//! flip schedule. Its kink statistic `d` counts the flips (after the first)
//! that land on a site with no flipped neighbour. Four independent routes
//! compute `#F(n, d)`, the number of histories with exactly `d` such kinks:
//!
//! * [`oracle`]: exhaustive enumeration and a backtracking generator,
//! * [`treedp`]: dynamic programming over a labelled generating tree,
//! * [`gf`]: series expansion of the bivariate generating function,
//!   the univariate rational generating functions and closed forms,
//! * [`gf::asymptotic_estimate`]: the leading-order asymptotic law.
//!
//! ```
//! use kinks::{treedp, History};
//!
//! let h = History::new(vec![1, 3, 2, 4]).unwrap();
//! assert_eq!(h.kink_count(), 1);
//!
//! let table = treedp::dp_table(4);
//! assert_eq!(table.row(4).unwrap(), &[8u32.into(), 16u32.into()]);
//! ```

pub mod algebra;
mod error;
pub mod gf;
mod history;
pub mod oracle;
mod table;
pub mod treedp;

pub use error::{Error, Result};
pub use history::{energy, factorial, max_kinks, EnergyParams, History, KinkLabel};
pub use table::CountTable;
