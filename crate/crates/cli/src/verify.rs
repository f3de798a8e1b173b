//! The `verify` suite: golden rows, cross-method agreement and the
//! structural identities every route must satisfy.

use kinks::algebra::Rat;
use kinks::gf::{closed_form, expand_g, expand_hd, ConvergenceReport};
use kinks::oracle::brute_force_table_with_ceiling;
use kinks::treedp::{dp_table, levels, tree_label_consistency};
use kinks::{factorial, max_kinks, CountTable};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_n_brute: usize,
    pub max_n_dp: usize,
    pub t_order: usize,
    pub v_order: usize,
    pub brute_ceiling: usize,
    pub golden: CountTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Scope summary on success, first counterexample on failure.
    pub detail: String,
    pub passed: bool,
}

type Check = Result<String, String>;

fn outcome(name: &'static str, result: Check) -> CheckOutcome {
    let passed = result.is_ok();
    let detail = result.unwrap_or_else(|e| e);
    CheckOutcome {
        name,
        detail,
        passed,
    }
}

/// Compares `candidate` against `reference` on the rows both hold, over the
/// common prefix of each row.
fn compare(
    reference: &CountTable,
    candidate: &CountTable,
    label: &str,
    upto: usize,
) -> Result<(), String> {
    for (n, row) in candidate.rows().filter(|(n, _)| *n <= upto) {
        let Some(expected) = reference.row(n) else {
            continue;
        };
        for (d, (got, want)) in row.iter().zip(expected).enumerate() {
            if got != want {
                return Err(format!("{label}: #F({n},{d}) = {got}, expected {want}"));
            }
        }
        if row.len() > expected.len() && reference.is_complete(n) {
            return Err(format!("{label}: row {n} longer than reference"));
        }
    }
    Ok(())
}

struct Tables {
    brute: CountTable,
    dp: CountTable,
    gf: Result<CountTable, String>,
}

fn golden_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    let golden_max = cfg.golden.max_n().ok_or("golden table is empty")?;
    for (n, row) in cfg.golden.rows() {
        let dp_row = t.dp.row(n).ok_or(format!("dp has no row {n}"))?;
        if row != dp_row {
            let d = row
                .iter()
                .zip(dp_row)
                .position(|(a, b)| a != b)
                .unwrap_or(row.len().min(dp_row.len()));
            return Err(format!(
                "h_{n} via dp: golden {} at d = {d}, computed {}",
                row.get(d).map_or("-".into(), ToString::to_string),
                dp_row.get(d).map_or("-".into(), ToString::to_string),
            ));
        }
    }
    compare(&cfg.golden, &t.brute, "brute vs golden", golden_max)?;
    let gf = t.gf.as_ref().map_err(Clone::clone)?;
    compare(&cfg.golden, gf, "gf vs golden", golden_max)?;
    Ok(format!(
        "h_{}..h_{golden_max} via dp, brute <= {}, gf <= {}",
        cfg.golden.min_n().unwrap(),
        cfg.max_n_brute,
        cfg.t_order
    ))
}

fn agreement_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    compare(&t.dp, &t.brute, "brute vs dp", cfg.max_n_brute)?;
    let gf = t.gf.as_ref().map_err(Clone::clone)?;
    compare(&t.dp, gf, "gf vs dp", cfg.t_order)?;
    Ok(format!(
        "brute = dp for n <= {}, gf = dp for n <= {}",
        cfg.max_n_brute, cfg.t_order
    ))
}

fn partition_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    for (n, row) in t.dp.rows().filter(|(n, _)| *n <= cfg.max_n_dp) {
        let sum: BigUint = row.iter().sum();
        if sum != factorial(n) {
            return Err(format!("dp row {n} sums to {sum}, not {n}!"));
        }
        if row[0] != BigUint::one() << (n - 1) {
            return Err(format!("#F({n},0) = {}, not 2^{}", row[0], n - 1));
        }
        if row.len() != max_kinks(n) + 1 || row.last().is_some_and(Zero::is_zero) {
            return Err(format!("dp row {n} does not end at d = {}", max_kinks(n)));
        }
    }
    let gf = t.gf.as_ref().map_err(Clone::clone)?;
    for (n, row) in gf.rows().filter(|&(n, _)| gf.is_complete(n)) {
        let sum: BigUint = row.iter().sum();
        if sum != factorial(n) {
            return Err(format!("gf row {n} sums to {sum}, not {n}!"));
        }
    }
    Ok(format!("sum_d #F(n,d) = n! for n <= {}", cfg.max_n_dp))
}

fn tree_check(cfg: &VerifyConfig) -> Check {
    let depth = cfg.max_n_dp.clamp(2, 8);
    let report = tree_label_consistency(depth).map_err(|e| e.to_string())?;
    if let Some(m) = report.mismatches.first() {
        return Err(format!(
            "inserting {} at position {} of {}: rule gives {}, word has {}",
            m.parent.len() + 1,
            m.position,
            m.parent,
            m.predicted,
            m.actual
        ));
    }
    for state in levels().take(cfg.max_n_dp.saturating_sub(1)) {
        if state.total() != factorial(state.level()) {
            return Err(format!(
                "level {} holds {} nodes",
                state.level(),
                state.total()
            ));
        }
    }
    Ok(format!(
        "{} insertions up to n = {depth}, level sizes n! to n = {}",
        report.insertions_checked, cfg.max_n_dp
    ))
}

fn integrality_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    t.gf.as_ref().map_err(Clone::clone)?;
    for d in 0..=3 {
        for n in 1..=cfg.max_n_dp {
            closed_form(n, d).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!(
        "G coefficients integral to (N, D) = ({}, {}), closed forms divide exactly",
        cfg.t_order, cfg.v_order
    ))
}

fn closed_form_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    for d in 0..=3 {
        for n in 2 * d + 1..=cfg.max_n_dp {
            let value = closed_form(n, d).map_err(|e| e.to_string())?;
            let expected = t.dp.get(n, d).cloned().unwrap_or_default();
            if value != expected {
                return Err(format!(
                    "closed form #F({n},{d}) = {value}, dp has {expected}"
                ));
            }
        }
    }
    Ok(format!("d <= 3, n <= {}", cfg.max_n_dp))
}

fn column_series_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    for d in 0..=3 {
        let coeffs = expand_hd(d, cfg.t_order).map_err(|e| e.to_string())?;
        for (n, c) in (2..).zip(coeffs) {
            let expected = t.dp.get(n, d).cloned().unwrap_or_default();
            if c != expected {
                return Err(format!(
                    "h^{d} coefficient of t^{n} = {c}, dp has {expected}"
                ));
            }
        }
    }
    Ok(format!("h^0..h^3 to t^{}", cfg.t_order))
}

/// Magnitude bound `2n (d/(d+1))^n` on the leading correction for `d >= 2`.
fn deviation_bound(n: usize, d: usize) -> Rat {
    let ratio = Rat::new(BigInt::from(d), BigInt::from(d + 1));
    Rat::from_integer(BigInt::from(2 * n)) * num_traits::pow(ratio, n)
}

fn convergence_check(cfg: &VerifyConfig, t: &Tables) -> Check {
    let n_max = cfg.max_n_dp;
    let mut covered = Vec::new();
    for d in (0..=3).filter(|d| n_max > 2 * d) {
        let report = ConvergenceReport::from_table(&t.dp, d, n_max).map_err(|e| e.to_string())?;
        let threshold = match d {
            0 => {
                if let Some(row) = report.rows.iter().find(|r| !r.deviation.is_zero()) {
                    return Err(format!(
                        "d = 0: deviation {} at n = {}",
                        row.deviation, row.n
                    ));
                }
                Rat::zero()
            }
            1 => {
                for row in &report.rows {
                    let expected = Rat::new(BigInt::from(2 * row.n), BigInt::one() << row.n);
                    if row.deviation != expected {
                        return Err(format!(
                            "d = 1: deviation at n = {} is {}, not 2n/2^n",
                            row.n, row.deviation
                        ));
                    }
                }
                Rat::new(BigInt::from(2 * n_max + 1), BigInt::one() << n_max)
            }
            _ => deviation_bound(n_max, d),
        };
        report.check(&threshold).map_err(|e| e.to_string())?;
        covered.push(d.to_string());
    }
    Ok(format!("d in {{{}}}, n <= {n_max}", covered.join(",")))
}

/// Runs every check; the order of the returned outcomes is fixed.
pub fn run_checks(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>, String> {
    let dp_max = cfg
        .max_n_dp
        .max(cfg.golden.max_n().unwrap_or(2))
        .max(cfg.t_order)
        .max(cfg.max_n_brute);
    let tables = Tables {
        brute: brute_force_table_with_ceiling(cfg.max_n_brute, cfg.brute_ceiling)
            .map_err(|e| e.to_string())?,
        dp: dp_table(dp_max),
        gf: expand_g(cfg.t_order, cfg.v_order).map_err(|e| e.to_string()),
    };
    Ok(vec![
        outcome("golden-tables", golden_check(cfg, &tables)),
        outcome("method-agreement", agreement_check(cfg, &tables)),
        outcome("partition", partition_check(cfg, &tables)),
        outcome("tree-labels", tree_check(cfg)),
        outcome("integrality", integrality_check(cfg, &tables)),
        outcome("closed-forms", closed_form_check(cfg, &tables)),
        outcome("column-series", column_series_check(cfg, &tables)),
        outcome("convergence", convergence_check(cfg, &tables)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_covers_deviation_on_monotone_window() {
        let dp = dp_table(80);
        for d in 2..=3 {
            let report = ConvergenceReport::from_table(&dp, d, 80).unwrap();
            for row in report.rows.iter().filter(|r| r.n >= 4 * d + 4) {
                assert!(
                    row.deviation < deviation_bound(row.n, d),
                    "({}, {d})",
                    row.n
                );
            }
        }
    }
}
