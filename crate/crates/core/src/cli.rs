//! Command-line front end. Exit status: 0 success, 1 usage error,
//! 2 undecided (budget exhausted), 3 a cross-check failed.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::accelerated::{accelerated_trace, cross_check, DEFAULT_MAX_ITERS};
use crate::classical::{classical_trajectory, DEFAULT_MAX_STEPS};
use crate::diophantine::solve_linear_diophantine;
use crate::error::Error;
use crate::export::{self, GraphMap, DEFAULT_GRAPH_LIMIT};
use crate::harness::{self, ScanConfig, DEFAULT_BUDGET, DEFAULT_CHUNK_SIZE};
use crate::natural::{collatz_step, Natural};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "collatz", version, about = "Accelerated Collatz iteration and oracle checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapKind {
    Classical,
    Accelerated,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the Collatz map once.
    Step { n: Natural },
    /// Classical trajectory with discrete derivatives.
    Trace {
        n: Natural,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        /// Keep iterating through the 4, 2, 1 cycle up to --max-steps.
        #[arg(long)]
        continue_past_one: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Odd-part accelerated trace.
    Accel {
        n: Natural,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: u64,
    },
    /// Cardinality of the trajectory set from the accelerated trace, checked
    /// against the classical stopping time.
    Card {
        n: Natural,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verify every n in [lo, hi).
    Scan {
        lo: u64,
        hi: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        resume_from: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk_size: u64,
    },
    /// Run the accelerated trace on 3^1 .. 3^max_exp.
    Pow3 {
        max_exp: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// DOT digraph of the map restricted to 1..=N.
    Graph {
        n: u64,
        #[arg(long, value_enum, default_value_t = MapKind::Classical)]
        map: MapKind,
        #[arg(long, default_value_t = DEFAULT_GRAPH_LIMIT)]
        limit: u64,
    },
    /// Solve a x + b y = c.
    #[command(name = "solve-dio", allow_negative_numbers = true)]
    SolveDio { a: BigInt, b: BigInt, c: BigInt },
}

enum Failure {
    Usage(String),
    Undecided(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_undecided() {
            Failure::Undecided(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(format!("io: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error kind=usage message={first:?}");
            return EXIT_USAGE;
        }
    };
    let (code, kind, msg) = match execute(cli.command, out, err) {
        Ok(()) => return EXIT_OK,
        Err(Failure::Usage(m)) => (EXIT_USAGE, "usage", m),
        Err(Failure::Undecided(m)) => (EXIT_UNDECIDED, "undecided", m),
        Err(Failure::Failed(m)) => (EXIT_FAILED, "failed", m),
    };
    let _ = writeln!(err, "error kind={kind} message={msg:?}");
    code
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Step { n } => writeln!(out, "{}", collatz_step(&n))?,

        Command::Trace {
            n,
            max_steps,
            continue_past_one,
            format,
        } => {
            let t = classical_trajectory(&n, max_steps, !continue_past_one)?;
            match format {
                Format::Table => write!(out, "{}", export::classical_table(&t))?,
                Format::Csv => out.write_all(&export::classical_to_csv(&t))?,
                Format::Json => writeln!(out, "{}", export::classical_to_json(&t))?,
            }
        }

        Command::Accel {
            n,
            format,
            max_iters,
        } => {
            let t = accelerated_trace(&n, max_iters)?;
            match format {
                Format::Table => write!(out, "{}", export::accelerated_table(&t))?,
                Format::Csv => out.write_all(&export::accelerated_to_csv(&t))?,
                Format::Json => writeln!(out, "{}", export::accelerated_to_json(&t))?,
            }
        }

        Command::Card { n, budget } => {
            let c = cross_check(&n, budget)?;
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{} (oracle: {} steps + 1) {verdict}",
                c.formula, c.stopping_time
            )?;
            if !c.passed() {
                return Err(Failure::Failed(format!("cross-check failed for {n}")));
            }
        }

        Command::Scan {
            lo,
            hi,
            workers,
            budget,
            resume_from,
            chunk_size,
        } => {
            let config = ScanConfig {
                budget,
                workers,
                chunk_size,
                resume_from,
            };
            let summary = harness::scan_range(lo, hi, &config, err)?;
            writeln!(out, "{}", summary.to_json())?;
            if !summary.mismatched.is_empty() {
                return Err(Failure::Failed(format!(
                    "{} cross-check mismatches",
                    summary.mismatched.len()
                )));
            }
            if summary.undecided > 0 {
                return Err(Failure::Undecided(format!(
                    "{} values undecided within budget {budget}",
                    summary.undecided
                )));
            }
        }

        Command::Pow3 {
            max_exp,
            budget,
            workers,
        } => {
            let results = harness::powers_of_three(max_exp, budget, workers)?;
            writeln!(out, "exponent,i_min,cardinality")?;
            let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            for r in &results {
                writeln!(
                    out,
                    "{},{},{}",
                    r.exponent,
                    opt(r.i_min.map(|i| i as u64)),
                    opt(r.cardinality)
                )?;
            }
            let undecided = results.iter().filter(|r| !r.terminated).count();
            if undecided > 0 {
                return Err(Failure::Undecided(format!("{undecided} exponents undecided")));
            }
            if let Some(bad) = results.iter().find(|r| !r.passed()) {
                return Err(Failure::Failed(format!("3^{} failed its cross-check", bad.exponent)));
            }
        }

        Command::Graph { n, map, limit } => {
            let map = match map {
                MapKind::Classical => GraphMap::Classical,
                MapKind::Accelerated => GraphMap::Accelerated,
            };
            let dot = export::graph_dot(n, map, limit)
                .map_err(|_| Failure::Usage(format!("N must be in 1..={limit}")))?;
            write!(out, "{dot}")?;
        }

        Command::SolveDio { a, b, c } => match solve_linear_diophantine(&a, &b, &c)? {
            Some(s) => writeln!(
                out,
                "gcd={} particular=({},{}) step=({},{})",
                s.gcd, s.particular.0, s.particular.1, s.step.0, s.step.1
            )?,
            None => writeln!(out, "no solution")?,
        },
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("collatz").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn step_command() {
        assert_eq!(call(&["step", "106"]), (0, "53\n".into(), String::new()));
    }

    #[test]
    fn card_command() {
        let (code, out, _) = call(&["card", "3200"]);
        assert_eq!(code, 0);
        assert_eq!(out, "31 (oracle: 30 steps + 1) PASS\n");
    }

    #[test]
    fn usage_errors() {
        for args in [&["step", "0"][..], &["step", "x"], &["bogus"], &["graph", "0"], &[]] {
            let (code, _, err) = call(args);
            assert_eq!(code, EXIT_USAGE, "{args:?}");
            assert!(err.starts_with("error kind=usage message="), "{err}");
        }
        let (code, _, _) = call(&["solve-dio", "0", "0", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn undecided_exit() {
        let (code, _, err) = call(&["card", "27", "--budget", "10"]);
        assert_eq!(code, EXIT_UNDECIDED);
        assert!(err.starts_with("error kind=undecided"));
        let (code, _, _) = call(&["accel", "27", "--max-iters", "3"]);
        assert_eq!(code, EXIT_UNDECIDED);
        let (code, out, err) = call(&["scan", "1", "50", "--budget", "5"]);
        assert_eq!(code, EXIT_UNDECIDED);
        assert!(out.contains("\"undecided\""));
        assert!(err.contains("CHUNK 1 50 ok="));
    }

    #[test]
    fn solve_dio_command() {
        let (code, out, _) = call(&["solve-dio", "1", "-3", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "gcd=1 particular=(1,0) step=(-3,-1)\n");
        assert_eq!(call(&["solve-dio", "2", "4", "3"]).1, "no solution\n");
    }

    #[test]
    fn pow3_command() {
        let (code, out, _) = call(&["pow3", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "exponent,i_min,cardinality\n1,2,8\n2,6,20\n");
    }

    #[test]
    fn graph_command() {
        let (code, out, _) = call(&["graph", "3", "--map", "accelerated"]);
        assert_eq!(code, 0);
        assert_eq!(out, "digraph collatz_odd {\n  1 -> 1;\n  3 -> 5;\n}\n");
    }

    #[test]
    fn export_formats() {
        let (_, csv, _) = call(&["accel", "3200", "--format", "csv"]);
        assert!(csv.contains("\n1,76,19,4,2,6,1000\n"));
        let (_, json, _) = call(&["trace", "106", "--format", "json"]);
        let t = export::classical_from_json(&json).unwrap();
        assert_eq!(t.reached_one_at, Some(12));
    }
}
