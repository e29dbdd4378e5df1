//! Command-line front end for `intersective-core`.
//!
//! Exit codes: 0 for a positive answer, 10 when a form is not intersective
//! or has no witness, 11 when the oracle disagrees with the decision, 2 for
//! usage errors and invalid input, 1 for internal failures.

pub mod config;
pub mod render;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use intersective_core::arith::factorize;
use intersective_core::oracle::compare;
use intersective_core::residues::{power_residues, unit_power_residues};
use intersective_core::solver::solvable_mod;
use intersective_core::{decide, default_arity, table, DiagonalForm, Error};
use rayon::prelude::*;

use config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 10;
pub const EXIT_DISAGREE: i32 = 11;

#[derive(Debug, Parser)]
#[command(name = "intersective", version, about = "Roots of x_1^n + ... + x_l^n - k modulo every integer")]
pub struct Cli {
    /// key=value file with `oracle_bound` and `sweep_parallel`
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide intersectivity with certificates
    Decide {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// A root modulo one integer
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long = "mod")]
        modulus: u64,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Solvability conditions by arity
    Table {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// n-th power residues modulo m
    Residues {
        #[arg(long)]
        n: u32,
        #[arg(long = "mod")]
        modulus: u64,
        /// only powers of units; needs a prime power modulus
        #[arg(long)]
        units: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare the decision with brute force up to a bound
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Decide a range of targets, one JSON line per k in increasing order
    Sweep {
        #[arg(long)]
        n: u32,
        /// inclusive range A..B
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        k_range: RangeInclusive<i64>,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        parallel: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// Failures after argument parsing, with their exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) | Error::Overflow(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

/// Parse `args` (program name first), run the command and return the exit
/// status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn form(n: u32, arity: Option<usize>, k: i64) -> Result<DiagonalForm, Failure> {
    let l = match arity {
        Some(l) => l,
        None => default_arity(n)?,
    };
    Ok(DiagonalForm::new(n, l, k)?)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| usage(e.to_string()))?,
        None => Config::default(),
    };
    match cli.command {
        Command::Decide { n, k, arity, json } => {
            let d = decide(n, k, arity)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&d)?)?;
            } else {
                write!(out, "{}", render::decision(&d))?;
            }
            Ok(if d.intersective { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Witness {
            n,
            k,
            modulus,
            arity,
            json,
        } => {
            let w = solvable_mod(&form(n, arity, k)?, modulus)?;
            match (&w, json) {
                (_, true) => writeln!(out, "{}", serde_json::to_string(&w)?)?,
                (Some(w), false) => writeln!(out, "{}", render::witness(w))?,
                (None, false) => writeln!(out, "none")?,
            }
            Ok(if w.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Table { n, format } => {
            let t = table(n)?;
            match format {
                Format::Md => write!(out, "{}", render::table_markdown(&t))?,
                Format::Csv => write!(out, "{}", render::table_csv(&t))?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(&t)?)?,
            }
            Ok(EXIT_OK)
        }
        Command::Residues {
            n,
            modulus,
            units,
            json,
        } => {
            let set = if units {
                let (p, j) = factorize(modulus)?
                    .as_prime_power()
                    .ok_or_else(|| usage(format!("--units needs a prime power modulus, got {modulus}")))?;
                unit_power_residues(n, p, j)?
            } else {
                power_residues(n, modulus)?
            };
            let members = set.to_vec();
            if json {
                writeln!(out, "{}", serde_json::to_string(&members)?)?;
            } else {
                writeln!(out, "{}", render::residues(&members))?;
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            n,
            k,
            arity,
            bound,
            json,
        } => {
            let bound = bound.unwrap_or_else(|| config.oracle_bound());
            if bound == 0 {
                return Err(usage(String::from("--bound must be positive")));
            }
            let report = compare(&form(n, arity, k)?, bound)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&report)?)?;
            } else {
                let verdict = if report.agree { "agree" } else { "DISAGREE" };
                writeln!(
                    out,
                    "{verdict}: n = {}, l = {}, k = {}, bound {}: {}",
                    report.n, report.l, report.k, report.bound, report.detail
                )?;
            }
            Ok(if report.agree { EXIT_OK } else { EXIT_DISAGREE })
        }
        Command::Sweep {
            n,
            k_range,
            arity,
            parallel,
        } => {
            let workers = parallel.or(config.sweep_parallel).unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Failure {
                    code: EXIT_FAILURE,
                    message: e.to_string(),
                })?;
            let ks: Vec<i64> = k_range.collect();
            // collect() keeps k order regardless of scheduling
            let lines = pool.install(|| {
                ks.par_iter()
                    .map(|&k| -> Result<String, Failure> { Ok(serde_json::to_string(&decide(n, k, arity)?)?) })
                    .collect::<Result<Vec<_>, _>>()
            })?;
            for line in lines {
                writeln!(out, "{line}")?;
            }
            Ok(EXIT_OK)
        }
    }
}
