//! Exit criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::collections::BTreeSet;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use kinks::algebra::{int, rat, sqrt_one_minus_v, Rat, TSeries, TruncPoly};
use kinks::gf::{closed_form, expand_g, expand_hd, ConvergenceReport};
use kinks::oracle::{brute_force_table, enumerate_histories};
use kinks::treedp::{dp_table, levels, tree_label_consistency};
use kinks::{factorial, max_kinks, CountTable};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, what: &str, result: Result<String, String>) {
    match result {
        Ok(detail) => println!("criterion {id}: PASS {what} ({detail})"),
        Err(why) => {
            println!("criterion {id}: FAIL {what}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden() -> CountTable {
    let rows: [(usize, &[u64]); 9] = [
        (2, &[2]),
        (3, &[4, 2]),
        (4, &[8, 16]),
        (5, &[16, 88, 16]),
        (6, &[32, 416, 272]),
        (7, &[64, 1824, 2880, 272]),
        (8, &[128, 7680, 24576, 7936]),
        (9, &[256, 31616, 185856, 137216, 7936]),
        (10, &[512, 128512, 1304832, 1841152, 353792]),
    ];
    let mut t = CountTable::new();
    for (n, row) in rows {
        t.insert_row(n, row.iter().map(|&c| BigUint::from(c)).collect());
    }
    t
}

fn kinks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kinks"))
        .args(args)
        .env_remove("KINKS_BRUTE_CEILING")
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_01_golden_tables() {
    let result = (|| {
        let start = Instant::now();
        brute_force_table(9).map_err(|e| e.to_string())?;
        let brute9_time = start.elapsed();
        ensure(brute9_time < Duration::from_secs(5), || {
            format!("brute <= 9 took {brute9_time:?}")
        })?;

        let brute = brute_force_table(10).map_err(|e| e.to_string())?;
        let dp = dp_table(10);
        let gf = expand_g(10, 4).map_err(|e| e.to_string())?;
        let gold = golden();
        for (name, table) in [("brute", &brute), ("dp", &dp), ("gf", &gf)] {
            ensure(table.restrict(2, 10) == gold, || {
                format!("{name} differs from h_2..h_10")
            })?;
        }
        let total = start.elapsed();
        ensure(total < Duration::from_secs(60), || {
            format!("three-way check took {total:?}")
        })?;
        Ok(format!("brute<=9 {brute9_time:.2?}, three-way {total:.2?}"))
    })();
    report(1, "golden tables h_2..h_10 via brute, dp, gf", result);
}

#[test]
fn criterion_02_f4_witnesses() {
    let words = |d| -> BTreeSet<String> {
        enumerate_histories(4, d, None)
            .unwrap()
            .map(|h| h.to_string())
            .collect()
    };
    let f4: BTreeSet<String> = [
        "1234", "2134", "2314", "2341", "3214", "3241", "3421", "4321",
    ]
    .map(String::from)
    .into();
    let f41: BTreeSet<String> = [
        "1243", "1324", "1342", "1423", "1432", "2143", "2413", "2431", "3124", "3142", "3412",
        "4123", "4132", "4213", "4231", "4312",
    ]
    .map(String::from)
    .into();
    let result = ensure(words(0) == f4, || "F_4 mismatch".into())
        .and_then(|_| ensure(words(1) == f41, || "F_4^1 mismatch".into()))
        .map(|_| "8 + 16 words".into());
    report(2, "F_4 and F_4^1 witness sets", result);
}

#[test]
fn criterion_03_partition_identity() {
    let result = (|| {
        let dp = dp_table(12);
        for n in 1..=12 {
            ensure(dp.row_sum(n) == Some(factorial(n)), || {
                format!("dp row {n}")
            })?;
        }
        let gf = expand_g(12, max_kinks(12)).map_err(|e| e.to_string())?;
        for n in 2..=12 {
            ensure(
                gf.is_complete(n) && gf.row_sum(n) == Some(factorial(n)),
                || format!("h_{n}(1) via G"),
            )?;
        }
        Ok("n <= 12 via dp and G".into())
    })();
    report(3, "sum_d #F(n,d) = n!", result);
}

#[test]
fn criterion_04_closed_forms() {
    let result = (|| {
        let start = Instant::now();
        let dp = dp_table(60);
        let mut checked = 0;
        for d in 0..=3 {
            for n in 2 * d + 1..=60 {
                let value = closed_form(n, d).map_err(|e| e.to_string())?;
                ensure(Some(&value) == dp.get(n, d), || {
                    format!("#F({n},{d}) = {value}")
                })?;
                checked += 1;
            }
        }
        let took = start.elapsed();
        ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
        Ok(format!("{checked} entries, {took:.2?}"))
    })();
    report(4, "closed forms d <= 3, 2d+1 <= n <= 60", result);
}

#[test]
fn criterion_05_column_series() {
    let result = (|| {
        let dp = dp_table(60);
        for d in 0..=3 {
            let coeffs = expand_hd(d, 20).map_err(|e| e.to_string())?;
            for (n, c) in (2..=20).zip(&coeffs) {
                let expected = dp.get(n, d).cloned().unwrap_or_default();
                ensure(*c == expected, || {
                    format!("h^{d}: t^{n} gives {c}, dp {expected}")
                })?;
            }
        }
        for n in 1..=60 {
            ensure(dp.get(n, 0) == Some(&(BigUint::one() << (n - 1))), || {
                format!("#F({n},0)")
            })?;
        }
        Ok("d <= 3, n <= 20; #F(n,0) = 2^(n-1) to 60".into())
    })();
    report(5, "column generating functions", result);
}

#[test]
fn criterion_06_tree_consistency() {
    let result = (|| {
        let r = tree_label_consistency(8).map_err(|e| e.to_string())?;
        ensure(r.is_clean(), || {
            format!(
                "{} mismatches, first {:?}",
                r.mismatches.len(),
                r.mismatches[0]
            )
        })?;
        for state in levels().take(59) {
            ensure(state.total() == factorial(state.level()), || {
                format!("level {}", state.level())
            })?;
        }
        Ok(format!("{} insertions, levels 2..60", r.insertions_checked))
    })();
    report(6, "generating-tree labels and level sizes", result);
}

#[test]
fn criterion_07_asymptotics() {
    let result = (|| {
        let dp = dp_table(60);
        let mut notes = Vec::new();
        let d0 = ConvergenceReport::from_table(&dp, 0, 60).map_err(|e| e.to_string())?;
        ensure(d0.rows.iter().all(|r| r.deviation.is_zero()), || {
            "d = 0 deviation nonzero".into()
        })?;

        let d1 = ConvergenceReport::from_table(&dp, 1, 60).map_err(|e| e.to_string())?;
        for r in &d1.rows {
            let expected = Rat::new(BigInt::from(2 * r.n), BigInt::one() << r.n);
            ensure(r.deviation == expected, || {
                format!("d = 1, n = {}: {}", r.n, r.deviation)
            })?;
        }

        let threshold = rat(1, 1_000_000);
        let mut failures = Vec::new();
        for d in 2..=3 {
            let rep = ConvergenceReport::from_table(&dp, d, 60).map_err(|e| e.to_string())?;
            let window: Vec<_> = rep.rows.iter().filter(|r| r.n >= 4 * d + 4).collect();
            if !window.windows(2).all(|w| w[1].deviation < w[0].deviation) {
                failures.push(format!(
                    "d = {d} not strictly decreasing from n = {}",
                    4 * d + 4
                ));
            }
            let last = &rep.rows.last().unwrap().deviation;
            let approx = kinks_cli::export::significant(last, 4);
            if *last < threshold {
                notes.push(format!("d = {d}: {approx} at n = 60"));
            } else {
                failures.push(format!(
                    "d = {d}: deviation {approx} at n = 60 is not < 1e-6"
                ));
            }
        }
        if failures.is_empty() {
            Ok(notes.join("; "))
        } else {
            Err(failures.join("; "))
        }
    })();
    report(7, "asymptotic deviation", result);
}

fn random_unit_series(rng: &mut ChaCha8Rng) -> TSeries {
    let (t_order, v_order) = (16, 8);
    let coeffs = (0..=t_order)
        .map(|k| {
            let cs = (0..=v_order)
                .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=9)))
                .collect();
            let mut c = TruncPoly::from_coeffs(cs, v_order);
            if k == 0 && !c.is_unit() {
                c = &c + &TruncPoly::one(v_order);
            }
            c
        })
        .collect();
    TSeries::from_coeffs(coeffs, t_order, v_order).unwrap()
}

#[test]
fn criterion_08_algebra_exactness() {
    let result = (|| {
        let start = Instant::now();
        for d in 0..=16 {
            let s = sqrt_one_minus_v(d);
            ensure(
                &s * &s == TruncPoly::from_coeffs(vec![int(1), int(-1)], d),
                || format!("sigma^2 at D = {d}"),
            )?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let one = TSeries::one(16, 8);
        for i in 0..100 {
            let a = random_unit_series(&mut rng);
            let inv = a.inverse().map_err(|e| e.to_string())?;
            ensure(&a * &inv == one, || format!("series #{i}"))?;
        }
        let took = start.elapsed();
        ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;
        Ok(format!("D <= 16, 100 series at (16, 8), {took:.2?}"))
    })();
    report(8, "exact series algebra", result);
}

#[test]
fn criterion_09_scale() {
    let result = (|| {
        let start = Instant::now();
        let dp = dp_table(200);
        let took = start.elapsed();
        ensure(dp.row_sum(200) == Some(factorial(200)), || {
            "row 200 sum".into()
        })?;
        ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
        Ok(format!("dp_table(200) in {took:.2?}"))
    })();
    report(9, "row 200 exact", result);
}

#[test]
fn criterion_10_cli_verify() {
    let result = (|| {
        let first = kinks(&["verify"]);
        ensure(first.status.code() == Some(0), || {
            String::from_utf8_lossy(&first.stdout).into_owned()
        })?;
        let second = kinks(&["verify"]);
        ensure(first.stdout == second.stdout, || {
            "verify output differs between runs".into()
        })?;
        let t1 = kinks(&["table", "--max-n", "30", "--format", "json"]);
        let t2 = kinks(&["table", "--max-n", "30", "--format", "json"]);
        ensure(t1.stdout == t2.stdout, || {
            "table output differs between runs".into()
        })?;

        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = dir.path().join("golden.json");
        let gold = golden();
        let mut corrupted = 0;
        for (n, row) in gold.rows() {
            for d in 0..row.len() {
                let mut bad = gold.clone();
                let mut new_row = row.to_vec();
                new_row[d] += 1u32;
                bad.insert_row(n, new_row);
                std::fs::write(&path, kinks_cli::export::to_json(&bad))
                    .map_err(|e| e.to_string())?;
                let out = kinks(&["verify", "--golden", path.to_str().unwrap()]);
                ensure(out.status.code() == Some(1), || {
                    format!("corrupted ({n},{d}) not detected")
                })?;
                let text = String::from_utf8_lossy(&out.stdout);
                ensure(text.contains("FAIL golden-tables"), || {
                    format!("({n},{d}): {text}")
                })?;
                corrupted += 1;
            }
        }
        Ok(format!(
            "exit 0, deterministic, {corrupted} corruptions caught"
        ))
    })();
    report(10, "CLI verify", result);
}
