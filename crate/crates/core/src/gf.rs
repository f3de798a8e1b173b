//! Generating-function routes to `#F(n, d)`.
//!
//! The bivariate series `G(t, v) = sum #F(n, d) v^d t^n` has the closed form
//!
//! ```text
//! G = sum_{j>=0} 4 t^2 s (1 - (1+2j) s t - t (1-v)) v^j
//!              / ((1+s)^(1+2j) (1 - 2j s t)^2 (1 - 2(j+1) s t)^2),   s = sqrt(1-v)
//! ```
//!
//! which [`g_series`] expands exactly in `Q[v, t]` truncated at `(N, D)`.
//! The columns `d = 0..=3` also have rational generating functions in `t`
//! alone ([`expand_hd`]) and explicit formulas ([`closed_form`]). For fixed
//! `d`, `#F(n, d) ~ 2^(n-2d-1) (d+1)^n` ([`asymptotic_estimate`]).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{as_natural, int, sqrt_one_minus_v, Rat, TSeries, TruncPoly};
use crate::history::max_kinks;
use crate::{treedp, CountTable, Error, Result};

/// The `j`-th summand of `G` at truncation `(t_order, v_order)`.
fn g_term(j: usize, sigma: &TruncPoly, t_order: usize) -> Result<TSeries> {
    let v_order = sigma.order();
    let one = TruncPoly::one(v_order);
    let vj = TruncPoly::monomial(j, v_order);
    let lead = &sigma.scale(&int(4)) * &vj;
    let one_minus_v = TruncPoly::from_ints(&[1, -1], v_order);
    let bracket = &(-&sigma.scale(&int(1 + 2 * j as i64))) - &one_minus_v;
    let numerator = TSeries::from_coeffs(
        vec![
            TruncPoly::zero(v_order),
            TruncPoly::zero(v_order),
            lead.clone(),
            &lead * &bracket,
        ],
        t_order,
        v_order,
    )?;
    if numerator.coeffs().iter().all(TruncPoly::is_zero) {
        return Ok(numerator);
    }

    let prefactor = (&one + sigma).pow(1 + 2 * j).inverse()?;
    let linear = |c: usize| {
        TSeries::from_coeffs(
            vec![one.clone(), -&sigma.scale(&int(c as i64))],
            t_order,
            v_order,
        )
    };
    let denominator = &linear(2 * j)?.pow(2) * &linear(2 * (j + 1))?.pow(2);
    (&numerator * &denominator.inverse()?).scale(&prefactor)
}

/// `G(t, v)` modulo `(t^(N+1), v^(D+1))`.
///
/// Only `j <= D` contributes: every later summand carries `v^j = 0`.
pub fn g_series(t_order: usize, v_order: usize) -> Result<TSeries> {
    if t_order < 2 {
        return Err(Error::out_of_range("t-order", t_order, "N >= 2"));
    }
    let sigma = sqrt_one_minus_v(v_order);
    let mut total = TSeries::zero(t_order, v_order);
    for j in 0..=v_order {
        total = &total + &g_term(j, &sigma, t_order)?;
    }
    debug_assert!(g_term(v_order + 1, &sigma, t_order)?
        .coeffs()
        .iter()
        .all(TruncPoly::is_zero));
    Ok(total)
}

/// Coefficient of `t^n v^d` as a count, rejecting anything that is not a
/// nonnegative integer.
pub fn series_count(series: &TSeries, n: usize, d: usize) -> Result<BigUint> {
    let value = series.coeff(n).coeff(d);
    as_natural(&value).ok_or_else(|| Error::NonIntegral {
        n,
        d,
        value: value.to_string(),
    })
}

/// Rows `2..=N` of the count table read off [`g_series`], each holding
/// `d <= min(D, max_kinks(n))`.
pub fn expand_g(t_order: usize, v_order: usize) -> Result<CountTable> {
    let series = g_series(t_order, v_order)?;
    let mut table = CountTable::new();
    for n in 2..=t_order {
        let top = max_kinks(n).min(v_order);
        let row = (0..=top)
            .map(|d| series_count(&series, n, d))
            .collect::<Result<Vec<_>>>()?;
        for d in top + 1..=v_order {
            if !series_count(&series, n, d)?.is_zero() {
                return Err(Error::NonIntegral {
                    n,
                    d,
                    value: format!(
                        "{} (expected 0 above the kink bound)",
                        series.coeff(n).coeff(d)
                    ),
                });
            }
        }
        table.insert_row(n, row);
    }
    Ok(table)
}

/// `t^shift * numerator / prod (1 - c t)^power` for one column.
struct ColumnGf {
    shift: usize,
    numerator: &'static [i64],
    /// `(c, power)` pairs.
    factors: &'static [(i64, usize)],
}

fn column_gf(d: usize) -> Option<ColumnGf> {
    let (shift, numerator, factors): (usize, &'static [i64], &'static [(i64, usize)]) = match d {
        0 => (2, &[2], &[(2, 1)]),
        1 => (3, &[2], &[(2, 2), (4, 1)]),
        2 => (5, &[16, -48], &[(2, 3), (4, 2), (6, 1)]),
        3 => (
            7,
            &[272, -2944, 10176, -11520],
            &[(2, 4), (4, 3), (6, 2), (8, 1)],
        ),
        _ => return None,
    };
    Some(ColumnGf {
        shift,
        numerator,
        factors,
    })
}

/// Coefficients of `t^2 ..= t^N` in the generating function of column `d`,
/// for `d <= 3`.
pub fn expand_hd(d: usize, t_order: usize) -> Result<Vec<BigUint>> {
    let ColumnGf {
        shift,
        numerator: numer,
        factors,
    } = column_gf(d).ok_or_else(|| Error::out_of_range("d", d, "0..=3"))?;
    if t_order < 2 {
        return Err(Error::out_of_range("t-order", t_order, "N >= 2"));
    }
    let poly = |c: i64| TruncPoly::constant(int(c), 0);
    let mut numerator = TSeries::zero(t_order, 0);
    for (i, &c) in numer.iter().enumerate() {
        numerator = &numerator + &TSeries::monomial(poly(c), shift + i, t_order);
    }
    let mut denominator = TSeries::one(t_order, 0);
    for &(c, power) in factors {
        let linear = TSeries::from_coeffs(vec![poly(1), poly(-c)], t_order, 0)?;
        denominator = &denominator * &linear.pow(power);
    }
    let series = &numerator * &denominator.inverse()?;
    (2..=t_order).map(|n| series_count(&series, n, 0)).collect()
}

fn pow_int(base: u32, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

/// Explicit formula for `#F(n, d)`, `d <= 3`. Zero when `n < 2d + 1`.
pub fn closed_form(n: usize, d: usize) -> Result<BigUint> {
    if d > 3 {
        return Err(Error::out_of_range("d", d, "0..=3"));
    }
    if n == 0 {
        return Err(Error::out_of_range("n", n, "n >= 1"));
    }
    if n < 2 * d + 1 {
        return Ok(BigUint::zero());
    }
    let m = BigInt::from(n);
    let (numer, denom): (BigInt, u32) = match d {
        0 => (pow_int(2, n - 1), 1),
        1 => (pow_int(2, n - 2) * (pow_int(2, n - 1) - &m), 1),
        // 6^n/32 - 4^n (n-1)/16 + 2^n (2n^2 - 4n - 1)/32
        2 => (
            pow_int(6, n) - pow_int(4, n) * (&m - 1) * 2
                + pow_int(2, n) * (&m * &m * 2 - &m * 4 - 1),
            32,
        ),
        // 8^n/128 - 6^n (n-2)/64 + 4^n (n^2 - 4n + 2)/64 - 2^n (2n^3 - 12n^2 + 13n + 6)/192
        3 => (
            pow_int(8, n) * 3 - pow_int(6, n) * (&m - 2) * 6
                + pow_int(4, n) * (&m * &m - &m * 4 + 2) * 6
                - pow_int(2, n) * (&m * &m * &m * 2 - &m * &m * 12 + &m * 13 + 6) * 2,
            384,
        ),
        _ => unreachable!(),
    };
    let (quotient, remainder) = numer.div_rem(&BigInt::from(denom));
    if !remainder.is_zero() || quotient.is_negative() {
        return Err(Error::Indivisible { n, d });
    }
    Ok(quotient.to_biguint().unwrap())
}

/// `2^(n-2d-1) (d+1)^n`, exactly.
pub fn asymptotic_estimate(n: usize, d: usize) -> Rat {
    let growth = Rat::from_integer(num_traits::pow(BigInt::from(d + 1), n));
    let exp = n as i64 - 2 * d as i64 - 1;
    let two_power = if exp >= 0 {
        Rat::from_integer(BigInt::one() << exp as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-exp) as usize)
    };
    growth * two_power
}

/// `|exact / estimate - 1|`.
pub fn relative_deviation(exact: &BigUint, n: usize, d: usize) -> Rat {
    let exact = Rat::from_integer(BigInt::from(exact.clone()));
    (exact / asymptotic_estimate(n, d) - Rat::one()).abs()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub exact: BigUint,
    pub estimate: Rat,
    pub deviation: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub d: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Tabulates column `d` of `table` for `2d + 1 <= n <= n_max`.
    pub fn from_table(table: &CountTable, d: usize, n_max: usize) -> Result<Self> {
        let first = 2 * d + 1;
        if n_max < first {
            return Err(Error::out_of_range(
                "n_max",
                n_max,
                format!("n_max >= {first}"),
            ));
        }
        let rows = (first..=n_max)
            .map(|n| {
                let exact = table
                    .get(n, d)
                    .cloned()
                    .ok_or_else(|| Error::out_of_range("n", n, "missing from table"))?;
                Ok(ConvergenceRow {
                    n,
                    estimate: asymptotic_estimate(n, d),
                    deviation: relative_deviation(&exact, n, d),
                    exact,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvergenceReport { d, rows })
    }

    /// Start of the window where the deviation must shrink: `n >= 4d + 4`.
    pub fn monotone_from(&self) -> usize {
        4 * self.d + 4
    }

    /// Deviation strictly decreasing from `4d + 4` on (an identically zero
    /// tail also qualifies) and below `threshold` at the last row.
    pub fn check(&self, threshold: &Rat) -> Result<()> {
        let start = self.monotone_from();
        for pair in self.rows.windows(2).filter(|w| w[0].n >= start) {
            let (a, b) = (&pair[0].deviation, &pair[1].deviation);
            if !(b < a || (a.is_zero() && b.is_zero())) {
                return Err(Error::Convergence(format!(
                    "d = {}: deviation at n = {} ({b}) not below n = {} ({a})",
                    self.d, pair[1].n, pair[0].n
                )));
            }
        }
        let last = self.rows.last().expect("report has at least one row");
        if !(last.deviation < *threshold || (last.deviation.is_zero() && threshold.is_zero())) {
            return Err(Error::Convergence(format!(
                "d = {}: deviation {} at n = {} not below {threshold}",
                self.d, last.deviation, last.n
            )));
        }
        Ok(())
    }
}

/// Convergence table for column `d` from the tree DP, checked against
/// `threshold` at `n_max`.
pub fn convergence_report(d: usize, n_max: usize, threshold: &Rat) -> Result<ConvergenceReport> {
    let report = ConvergenceReport::from_table(&treedp::dp_table(n_max), d, n_max)?;
    report.check(threshold)?;
    Ok(report)
}
