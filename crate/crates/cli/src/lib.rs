//! Command-line front end: count, tabulate, enumerate, verify and compare
//! against the asymptotic law.

pub mod export;
pub mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use kinks::gf::{closed_form, expand_g, g_series, series_count, ConvergenceReport};
use kinks::oracle::{
    backtrack_count, brute_force_table_with_ceiling, enumerate_histories, BRUTE_FORCE_CEILING,
};
use kinks::treedp::dp_table;
use kinks::{max_kinks, CountTable};
use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::verify::VerifyConfig;

pub const CEILING_ENV: &str = "KINKS_BRUTE_CEILING";

/// Backtracking is only offered where its memo stays small.
const BACKTRACK_LIMIT: usize = 24;

const GOLDEN: &str = include_str!("../data/golden.json");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            _ => 2,
        }
    }
}

impl From<kinks::Error> for CliError {
    fn from(e: kinks::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kinks",
    version,
    about = "Count Ising-chain flip histories by kinks created"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Backtrack,
    Dp,
    Gf,
    Closed,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Backtrack => "backtrack",
            Method::Dp => "dp",
            Method::Gf => "gf",
            Method::Closed => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of histories of n sites with d extra kinks.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        /// Run every applicable method; exit 1 if any disagree.
        #[arg(long)]
        all_methods: bool,
    },
    /// Export the count table.
    Table {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List histories in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 9)]
        max_n_brute: usize,
        #[arg(long, default_value_t = 60)]
        max_n_dp: usize,
        #[arg(long, default_value_t = 20)]
        t_order: usize,
        #[arg(long, default_value_t = 6)]
        v_order: usize,
        /// JSON table of reference rows (defaults to the built-in h_2..h_10).
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Compare exact counts with the asymptotic estimate.
    Asym {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Factorial guard for brute force, overridable through the environment.
pub fn brute_ceiling() -> Result<usize, CliError> {
    match std::env::var(CEILING_ENV) {
        Err(_) => Ok(BRUTE_FORCE_CEILING),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(CliError::Usage(format!(
                "{CEILING_ENV} must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

fn check_kinks(n: usize, d: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if d > max_kinks(n) {
        return Err(CliError::Usage(format!(
            "d = {d} exceeds the maximum {} for n = {n}",
            max_kinks(n)
        )));
    }
    Ok(())
}

fn count_with(method: Method, n: usize, d: usize, ceiling: usize) -> Result<BigUint, CliError> {
    check_kinks(n, d)?;
    let value = match method {
        Method::Brute => {
            let table = brute_force_table_with_ceiling(n, ceiling)?;
            table.get(n, d).cloned().unwrap_or_default()
        }
        Method::Backtrack => {
            if n > BACKTRACK_LIMIT {
                return Err(CliError::Usage(format!(
                    "backtrack supports n <= {BACKTRACK_LIMIT}"
                )));
            }
            backtrack_count(n, d)?
        }
        Method::Dp => dp_table(n).get(n, d).cloned().unwrap_or_default(),
        Method::Gf => {
            if n < 2 {
                // the series starts at t^2; row 1 is the single-site convention
                BigUint::from(1u32)
            } else {
                series_count(&g_series(n, d)?, n, d)
                    .map_err(|e| CliError::Mismatch(e.to_string()))?
            }
        }
        Method::Closed => closed_form(n, d)?,
    };
    Ok(value)
}

fn applicable(method: Method, n: usize, d: usize, ceiling: usize) -> bool {
    match method {
        Method::Brute => n <= ceiling.min(20),
        Method::Backtrack => n <= BACKTRACK_LIMIT,
        Method::Dp | Method::Gf => true,
        Method::Closed => d <= 3,
    }
}

fn cmd_count(
    out: &mut dyn Write,
    n: usize,
    d: usize,
    method: Method,
    all: bool,
) -> Result<(), CliError> {
    let ceiling = brute_ceiling()?;
    check_kinks(n, d)?;
    if !all {
        writeln!(out, "{}", count_with(method, n, d, ceiling)?)?;
        return Ok(());
    }
    let mut seen: Option<BigUint> = None;
    let mut disagree = false;
    for m in Method::value_variants()
        .iter()
        .copied()
        .filter(|&m| applicable(m, n, d, ceiling))
    {
        let value = count_with(m, n, d, ceiling)?;
        writeln!(out, "{} {value}", m.name())?;
        match &seen {
            Some(first) if *first != value => disagree = true,
            Some(_) => {}
            None => seen = Some(value),
        }
    }
    if disagree {
        return Err(CliError::Mismatch(format!(
            "methods disagree on #F({n},{d})"
        )));
    }
    Ok(())
}

pub fn build_table(method: Method, max_n: usize) -> Result<CountTable, CliError> {
    if max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let ceiling = brute_ceiling()?;
    Ok(match method {
        Method::Dp => dp_table(max_n),
        Method::Brute => brute_force_table_with_ceiling(max_n, ceiling)?,
        Method::Gf => {
            let mut table = if max_n >= 2 {
                expand_g(max_n, max_kinks(max_n))?
            } else {
                CountTable::new()
            };
            table.insert_row(1, vec![1u32.into()]);
            table
        }
        Method::Backtrack | Method::Closed => {
            if method == Method::Backtrack && max_n > BACKTRACK_LIMIT {
                return Err(CliError::Usage(format!(
                    "backtrack supports n <= {BACKTRACK_LIMIT}"
                )));
            }
            let mut table = CountTable::new();
            for n in 1..=max_n {
                let top = if method == Method::Closed {
                    max_kinks(n).min(3)
                } else {
                    max_kinks(n)
                };
                let row = (0..=top)
                    .map(|d| count_with(method, n, d, ceiling))
                    .collect::<Result<_, _>>()?;
                table.insert_row(n, row);
            }
            table
        }
    })
}

fn render_table(table: &CountTable, format: Format) -> String {
    match format {
        Format::Csv => export::to_csv(table),
        Format::Json => export::to_json(table),
        Format::Text => export::to_text(table),
    }
}

fn cmd_table(
    out: &mut dyn Write,
    max_n: usize,
    min_n: usize,
    method: Method,
    format: Format,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let table = build_table(method, max_n)?.restrict(min_n.max(1), max_n);
    let body = render_table(&table, format);
    match output {
        Some(path) => fs::write(&path, body)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn cmd_enumerate(
    out: &mut dyn Write,
    n: usize,
    d: usize,
    limit: Option<usize>,
) -> Result<(), CliError> {
    check_kinks(n, d)?;
    for history in enumerate_histories(n, d, limit)? {
        writeln!(out, "{history}")?;
    }
    Ok(())
}

fn load_golden(path: Option<PathBuf>) -> Result<CountTable, CliError> {
    let text = match path {
        Some(p) => fs::read_to_string(&p)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => GOLDEN.to_string(),
    };
    let table = export::parse_json(&text)?;
    if table.is_empty() {
        return Err(CliError::Input("golden table has no rows".into()));
    }
    Ok(table)
}

fn cmd_verify(out: &mut dyn Write, cfg: VerifyConfig) -> Result<(), CliError> {
    if cfg.max_n_brute == 0 || cfg.max_n_brute > cfg.brute_ceiling.min(20) {
        return Err(CliError::Usage(format!(
            "--max-n-brute must be in 1..={} ({CEILING_ENV} raises the ceiling)",
            cfg.brute_ceiling.min(20)
        )));
    }
    if cfg.max_n_dp < 2 || cfg.t_order < 2 {
        return Err(CliError::Usage(
            "--max-n-dp and --t-order must be at least 2".into(),
        ));
    }
    let outcomes = verify::run_checks(&cfg).map_err(CliError::Usage)?;
    let mut failed = None;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {}: {}", o.name, o.detail)?;
        if !o.passed && failed.is_none() {
            failed = Some(o.name);
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    match failed {
        None => {
            writeln!(out, "verify: PASS ({passed}/{} checks)", outcomes.len())?;
            Ok(())
        }
        Some(name) => {
            writeln!(out, "verify: FAIL ({passed}/{} checks)", outcomes.len())?;
            Err(CliError::Mismatch(format!("check {name} failed")))
        }
    }
}

#[derive(Serialize)]
struct AsymRow {
    n: usize,
    exact: String,
    estimate: String,
    deviation: String,
}

fn cmd_asym(out: &mut dyn Write, d: usize, max_n: usize, format: Format) -> Result<(), CliError> {
    if max_n < 2 * d + 1 {
        return Err(CliError::Usage(format!(
            "--max-n must be at least {} for d = {d}",
            2 * d + 1
        )));
    }
    let report = ConvergenceReport::from_table(&dp_table(max_n), d, max_n)?;
    let rows: Vec<AsymRow> = report
        .rows
        .iter()
        .map(|r| AsymRow {
            n: r.n,
            exact: r.exact.to_string(),
            estimate: export::rational(&r.estimate),
            deviation: export::significant(&r.deviation, 6),
        })
        .collect();
    match format {
        Format::Csv => {
            writeln!(out, "n,exact,estimate,deviation")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.n, r.exact, r.estimate, r.deviation)?;
            }
        }
        Format::Json => {
            let body = serde_json::to_string_pretty(&serde_json::json!({ "d": d, "rows": rows }))
                .expect("report serialises");
            writeln!(out, "{body}")?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:>4}  {:>24}  {:>24}  {:>12}",
                "n", "exact", "estimate", "deviation"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>4}  {:>24}  {:>24}  {:>12}",
                    r.n, r.exact, r.estimate, r.deviation
                )?;
            }
        }
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Count {
            n,
            d,
            method,
            all_methods,
        } => cmd_count(out, n, d, method, all_methods),
        Command::Table {
            max_n,
            min_n,
            method,
            format,
            output,
        } => cmd_table(out, max_n, min_n, method, format, output),
        Command::Enumerate { n, d, limit } => cmd_enumerate(out, n, d, limit),
        Command::Verify {
            max_n_brute,
            max_n_dp,
            t_order,
            v_order,
            golden,
        } => {
            let cfg = VerifyConfig {
                max_n_brute,
                max_n_dp,
                t_order,
                v_order,
                brute_ceiling: brute_ceiling()?,
                golden: load_golden(golden)?,
            };
            cmd_verify(out, cfg)
        }
        Command::Asym { d, max_n, format } => cmd_asym(out, d, max_n, format),
    }
}
