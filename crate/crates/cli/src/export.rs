//! Table serialisation. Counts are always written as decimal strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use kinks::algebra::Rat;
use kinks::{max_kinks, CountTable};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct JsonTable {
    rows: Vec<JsonRow>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRow {
    n: usize,
    counts: Vec<String>,
}

pub fn to_csv(table: &CountTable) -> String {
    let mut out = String::from("n,d,count\n");
    for (n, row) in table.rows() {
        for (d, count) in row.iter().enumerate() {
            writeln!(out, "{n},{d},{count}").unwrap();
        }
    }
    out
}

pub fn to_json(table: &CountTable) -> String {
    let doc = JsonTable {
        rows: table
            .rows()
            .map(|(n, row)| JsonRow {
                n,
                counts: row.iter().map(ToString::to_string).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("table serialises");
    out.push('\n');
    out
}

/// One polynomial per line, e.g. `h_5(v) = 16 + 88v + 16v^2`.
pub fn to_text(table: &CountTable) -> String {
    let mut out = String::new();
    for (n, row) in table.rows() {
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| match d {
                0 => c.to_string(),
                1 => format!("{c}v"),
                _ => format!("{c}v^{d}"),
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        writeln!(out, "h_{n}(v) = {body}").unwrap();
    }
    out
}

fn parse_count(s: &str) -> Result<BigUint, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Input(format!("bad count {s:?}")))
}

fn build(rows: BTreeMap<usize, Vec<BigUint>>) -> Result<CountTable, CliError> {
    let mut table = CountTable::new();
    for (n, row) in rows {
        if n == 0 || row.len() > max_kinks(n) + 1 {
            return Err(CliError::Input(format!(
                "row n = {n} has {} entries, at most {} allowed",
                row.len(),
                max_kinks(n) + 1
            )));
        }
        table.insert_row(n, row);
    }
    Ok(table)
}

pub fn parse_csv(text: &str) -> Result<CountTable, CliError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("n,d,count") {
        return Err(CliError::Input("missing header n,d,count".into()));
    }
    let mut rows: BTreeMap<usize, Vec<BigUint>> = BTreeMap::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        let [n, d, count] = fields[..] else {
            return Err(CliError::Input(format!("bad line {line:?}")));
        };
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Input(format!("bad n in {line:?}")))?;
        let d: usize = d
            .parse()
            .map_err(|_| CliError::Input(format!("bad d in {line:?}")))?;
        let row = rows.entry(n).or_default();
        if row.len() != d {
            return Err(CliError::Input(format!(
                "row {n}: expected d = {}, got {d}",
                row.len()
            )));
        }
        row.push(parse_count(count)?);
    }
    build(rows)
}

pub fn parse_json(text: &str) -> Result<CountTable, CliError> {
    let doc: JsonTable =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad JSON table: {e}")))?;
    let mut rows = BTreeMap::new();
    for row in doc.rows {
        let counts = row
            .counts
            .iter()
            .map(|c| parse_count(c))
            .collect::<Result<_, _>>()?;
        if rows.insert(row.n, counts).is_some() {
            return Err(CliError::Input(format!("duplicate row n = {}", row.n)));
        }
    }
    build(rows)
}

/// An exact rational as `p` or `p/q`.
pub fn rational(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// `r * 10^e` for a signed exponent.
fn shift10(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        r * Rat::from_integer(pow10(e as u32))
    } else {
        r / Rat::from_integer(pow10((-e) as u32))
    }
}

/// Scientific notation rounded half-up to `digits` significant digits,
/// e.g. `3.81470e-5`. Zero prints as `0`.
pub fn significant(r: &Rat, digits: usize) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let r = r.abs();
    let bits = |x: &BigInt| x.bits() as i64;
    // estimate floor(log10 r), then correct exactly
    let mut e =
        ((bits(r.numer()) - bits(r.denom())) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while shift10(&r, -e) >= Rat::from_integer(BigInt::from(10)) {
        e += 1;
    }
    while shift10(&r, -e) < Rat::one() {
        e -= 1;
    }
    let scaled = shift10(&r, digits as i64 - 1 - e);
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    if mantissa == pow10(digits as u32) {
        mantissa = pow10(digits as u32 - 1);
        e += 1;
    }
    let m = mantissa.to_string();
    let (head, tail) = m.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kinks::algebra::{int, rat};
    use kinks::treedp::dp_table;

    #[test]
    fn csv_layout() {
        let csv = to_csv(&dp_table(4).restrict(2, 4));
        assert_eq!(csv, "n,d,count\n2,0,2\n3,0,4\n3,1,2\n4,0,8\n4,1,16\n");
        assert_eq!(parse_csv(&csv).unwrap(), dp_table(4).restrict(2, 4));
    }

    #[test]
    fn text_layout() {
        let text = to_text(&dp_table(5).restrict(2, 5));
        assert_eq!(
            text,
            "h_2(v) = 2\nh_3(v) = 4 + 2v\nh_4(v) = 8 + 16v\nh_5(v) = 16 + 88v + 16v^2\n"
        );
    }

    #[test]
    fn json_round_trip_beyond_u64() {
        let table = dp_table(30);
        assert_eq!(parse_json(&to_json(&table)).unwrap(), table);
        assert_eq!(parse_csv(&to_csv(&table)).unwrap(), table);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_csv("n,d\n").is_err());
        assert!(parse_csv("n,d,count\n4,1,16\n").is_err());
        assert!(parse_csv("n,d,count\n4,0,x\n").is_err());
        assert!(parse_csv("n,d,count\n4,0,8\n4,1,16\n4,2,0\n").is_err());
        assert!(parse_json(r#"{"rows":[{"n":2,"counts":[2]}]}"#).is_err());
        assert!(parse_json(r#"{"rows":[{"n":2,"counts":["2"]},{"n":2,"counts":["2"]}]}"#).is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(&rat(40, 1 << 20), 6), "3.81470e-5");
        assert_eq!(significant(&int(0), 6), "0");
        assert_eq!(significant(&int(1), 6), "1.00000e0");
        assert_eq!(significant(&rat(9999999, 1000000), 6), "1.00000e1");
        assert_eq!(significant(&rat(1, 3), 3), "3.33e-1");
        assert_eq!(significant(&rat(-3, 4), 1), "-8e-1");
        assert_eq!(rational(&rat(1, 2)), "1/2");
        assert_eq!(rational(&int(8)), "8");
    }
}
