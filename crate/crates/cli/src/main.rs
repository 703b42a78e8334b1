//! `stirling`: certified Stirling bounds, sequence dumps and the verifier.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use render::{Format, ShownBound, ShownInterval};
use stirling_core::enclosure::{constant_e, constant_pi, exp};
use stirling_core::exactcore::factorial;
use stirling_core::sequences::{self, FactorialCursor};
use stirling_core::verifier::{self, Check, CheckConfig};
use stirling_core::wallis::{self, WallisSweep};
use stirling_core::{decimal, stirling, Dyadic, Error, Interval, Precision, Rounding};

/// Default ceiling for `exact`.
const EXACT_CAP: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "stirling", version, about = "Certified Stirling bounds and proof checks")]
struct Cli {
    /// Working precision in bits
    #[arg(long, global = true, env = "STIRLING_PREC", default_value_t = 53, value_parser = parse_bits)]
    prec: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified lower and upper bounds for n!
    Approx {
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exact decimal expansion of n!
    Exact {
        n: u64,
        #[arg(long, default_value_t = EXACT_CAP)]
        cap: u64,
    },
    /// Number of decimal digits of n!
    Digits { n: u64 },
    /// One enclosure per n of a sequence
    Sequence {
        #[arg(long, value_enum)]
        seq: Seq,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check the proof's inequalities over a range of n
    Verify {
        #[arg(long, default_value_t = 1)]
        min_n: u64,
        #[arg(long, default_value_t = 10_000)]
        max_n: u64,
        /// Defaults to the smaller of 53 and --prec-max
        #[arg(long, value_parser = parse_bits)]
        prec_start: Option<u32>,
        #[arg(long, default_value_t = 256, value_parser = parse_bits)]
        prec_max: u32,
        /// Comma separated: exact, a-decreasing, bdiff, shifted, floor, limits, all
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long)]
        workers: Option<usize>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Enclosures of the constants that appear in the proof
    Constants {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Seq {
    A,
    B,
    Ratio,
    Bdiff,
    #[value(name = "W")]
    W,
    #[value(name = "L")]
    L,
}

fn parse_bits(s: &str) -> Result<u32, String> {
    let bits: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Precision::new(bits).map(|p| p.bits()).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Undecided { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let p = Precision::new(cli.prec).expect("validated by parser");
    match run(cli.command, p) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, p: Precision) -> Outcome {
    match command {
        Command::Approx { n, format } => approx(n, p, format),
        Command::Exact { n, cap } => exact(n, cap),
        Command::Digits { n } => digits(n),
        Command::Sequence { seq, from, to, format } => sequence(seq, from, to, p, format),
        Command::Verify {
            min_n,
            max_n,
            prec_start,
            prec_max,
            checks,
            workers,
            report,
        } => verify(min_n, max_n, prec_start, prec_max, &checks, workers, report),
        Command::Constants { format } => constants(p, format),
    }
}

#[derive(Serialize)]
struct ApproxOut {
    n: u64,
    bits: u32,
    approx: ShownInterval,
    lower: ShownBound,
    upper: ShownBound,
    rel_err_bound: ShownInterval,
}

fn approx(n: u64, p: Precision, format: Format) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let b = stirling::factorial_bounds(n, p)?;
    let digits = decimal::separating_digits(&b.approx, decimal::max_digits(p));
    let out = ApproxOut {
        n,
        bits: p.bits(),
        approx: ShownInterval::new(&b.approx, p),
        lower: ShownBound::new(&b.lower, digits, Rounding::Down),
        upper: ShownBound::new(&b.upper, digits, Rounding::Up),
        rel_err_bound: ShownInterval::new(&stirling::relative_error_bound(n, p)?, p),
    };
    let text = match format {
        Format::Json => render::json(&out) + "\n",
        Format::Csv => render::csv(
            &["n", "approx_lo", "approx_hi", "lower", "upper", "rel_err_bound"],
            &[vec![
                n.to_string(),
                out.approx.lo.clone(),
                out.approx.hi.clone(),
                out.lower.value.clone(),
                out.upper.value.clone(),
                out.rel_err_bound.hi.clone(),
            ]],
        ),
        Format::Table => render::table(
            &["quantity", "value"],
            &[
                vec!["n".into(), n.to_string()],
                vec!["sqrt(2 pi n) (n/e)^n".into(), format!("[{}, {}]", out.approx.lo, out.approx.hi)],
                vec!["lower bound".into(), out.lower.value.clone()],
                vec!["upper bound".into(), out.upper.value.clone()],
                vec!["e^(1/(4n)) - 1".into(), format!("[{}, {}]", out.rel_err_bound.lo, out.rel_err_bound.hi)],
            ],
        ),
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn exact(n: u64, cap: u64) -> Outcome {
    if n > cap {
        return Err(Failure::Usage(format!("n = {n} exceeds the cap {cap}; raise it with --cap")));
    }
    println!("{}", factorial(n));
    Ok(ExitCode::SUCCESS)
}

fn digits(n: u64) -> Outcome {
    let d = if n == 0 { 1 } else { stirling::digit_count(n)? };
    println!("{d}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SeqRow {
    n: u64,
    #[serde(flatten)]
    value: ShownInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    den: Option<String>,
}

#[derive(Serialize)]
struct SeqOut {
    seq: String,
    bits: u32,
    rows: Vec<SeqRow>,
}

fn seq_name(seq: Seq) -> String {
    seq.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn sequence(seq: Seq, from: u64, to: u64, p: Precision, format: Format) -> Outcome {
    if from == 0 || from > to {
        return Err(Failure::Usage(format!("need 1 <= from <= to, got {from}..{to}")));
    }
    let mut rows = Vec::new();
    match seq {
        Seq::A | Seq::B => {
            let mut cursor = FactorialCursor::new(from);
            for n in from..=to {
                let b = cursor.b(if seq == Seq::A { p.with_extra(4) } else { p });
                let v = if seq == Seq::A { sequences::a_from_b(&b, p) } else { b };
                rows.push((n, v, None));
                if n < to {
                    cursor.advance();
                }
            }
        }
        Seq::Ratio | Seq::Bdiff => {
            for n in from..=to {
                let v = if seq == Seq::Ratio {
                    sequences::ratio_of(n, p)?
                } else {
                    sequences::b_diff_series(n, p)?
                };
                rows.push((n, v, None));
            }
        }
        Seq::W | Seq::L => {
            let mut sweep = WallisSweep::new(from)?;
            for n in from..=to {
                if seq == Seq::W {
                    let w = sweep.partial().clone();
                    rows.push((n, Interval::from_rational(&w, p), Some(w)));
                } else {
                    rows.push((n, wallis::lemma_l_from_central(n, sweep.central(), p), None));
                }
                if n < to {
                    sweep.advance();
                }
            }
        }
    }
    let rows: Vec<SeqRow> = rows
        .into_iter()
        .map(|(n, v, exact)| SeqRow {
            n,
            value: ShownInterval::new(&v, p),
            num: exact.as_ref().map(|q| q.numer().to_string()),
            den: exact.as_ref().map(|q| q.denom().to_string()),
        })
        .collect();
    let text = if format == Format::Json {
        render::json(&SeqOut {
            seq: seq_name(seq),
            bits: p.bits(),
            rows,
        }) + "\n"
    } else {
        let with_exact = seq == Seq::W;
        let header: &[&str] = if with_exact { &["n", "lo", "hi", "num", "den"] } else { &["n", "lo", "hi"] };
        let cells: Vec<Vec<String>> = rows
            .into_iter()
            .map(|r| {
                let mut cells = vec![r.n.to_string(), r.value.lo, r.value.hi];
                cells.extend(r.num);
                cells.extend(r.den);
                cells
            })
            .collect();
        render::rows(format, header, &cells)
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn verify(
    min_n: u64,
    max_n: u64,
    prec_start: Option<u32>,
    prec_max: u32,
    checks: &str,
    workers: Option<usize>,
    report: Option<PathBuf>,
) -> Outcome {
    let p_start = prec_start.unwrap_or(prec_max.min(53));
    let cfg = CheckConfig {
        n_min: min_n,
        n_max: max_n,
        p_start: Precision::new(p_start)?,
        p_max: Precision::new(prec_max)?,
        checks: Check::parse_list(checks)?,
        workers: workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    let result = verifier::run_all(&cfg)?;
    let text = result.to_json() + "\n";
    match report {
        Some(path) => {
            fs::write(&path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let rows: Vec<Vec<String>> = result
                .results
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
                        r.max_bits.to_string(),
                        (r.failures.len() as u64 + r.omitted_failures).to_string(),
                    ]
                })
                .collect();
            print!("{}", render::table(&["check", "status", "max_bits", "failures"], &rows));
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::from(result.exit_code() as u8))
}

#[derive(Serialize)]
struct ConstantRow {
    name: &'static str,
    #[serde(flatten)]
    value: ShownInterval,
}

fn constants(p: Precision, format: Format) -> Outcome {
    let three_quarters = Interval::point(Dyadic::new(3.into(), -2));
    let values = [
        ("e", constant_e(p)),
        ("pi", constant_pi(p)),
        ("sqrt(pi)", stirling::sqrt_pi(p)),
        ("sqrt(2 pi)", stirling::sqrt_two_pi(p)),
        ("pi/2", stirling::half_pi(p)),
        ("e^(3/4)", exp(&three_quarters, p)),
    ];
    let rows: Vec<ConstantRow> = values
        .iter()
        .map(|(name, v)| ConstantRow {
            name,
            value: ShownInterval::new(v, p),
        })
        .collect();
    let text = if format == Format::Json {
        render::json(&rows) + "\n"
    } else {
        let cells: Vec<Vec<String>> = rows
            .into_iter()
            .map(|r| vec![r.name.to_string(), r.value.lo, r.value.hi])
            .collect();
        render::rows(format, &["name", "lo", "hi"], &cells)
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}
