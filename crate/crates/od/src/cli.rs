//! The `od` command-line front end.
//!
//! Exit codes: 0 for success or a true answer, 1 for an invalid diagram or a
//! failed check, 2 for usage, parse and input errors. Data goes to the output
//! stream and diagnostics to the error stream.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chain::{synth, verify_rope_laws};
use crate::enumerate::{enumerate_valid, EnumConfig};
use crate::error::OdError;
use crate::order::cmp_checked;
use crate::qpart::{derive, in_set, QView};
use crate::suite::run_all;
use crate::textio::{parse_descriptor, parse_term, DescriptorFile};
use crate::validity::{check_term, ValidityReport};

/// Default seed for `selftest` when neither `--seed` nor `OD_SEED` is given.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser, Debug)]
#[command(name = "od", version, about = "Ordinal diagrams for Pi_N-reflection")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// The level parameter N (at least 4).
    #[arg(long = "n", global = true, default_value_t = 4)]
    n: u32,
    /// RNG seed for `selftest`; the environment variable OD_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest term size for `enum`.
    #[arg(long, global = true, default_value_t = 3)]
    max_size: usize,
    /// Maximum number of terms `enum` produces.
    #[arg(long, global = true, default_value_t = 100_000)]
    count_cap: usize,
    /// Rope descriptor file for `chain-synth` and `chain-verify`.
    #[arg(long, global = true)]
    desc: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a term for membership and print the report.
    Validate { term: String },
    /// Compare two valid terms; prints LT, EQ or GT.
    Cmp { a: String, b: String },
    /// List valid terms up to --max-size in canonical order.
    Enum,
    /// Print In and the per-level pd, st, rg of a collapse.
    Qpart { term: String },
    /// Synthesize the collapse described by --desc and report its validity.
    ChainSynth,
    /// Check the rope laws of the descriptor given by --desc.
    ChainVerify,
    /// Run the acceptance criteria.
    Selftest,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<OdError> for Failure {
    fn from(e: OdError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure { code: 2, message: format!("write failed: {}", e) }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.global;
    if g.n < 4 {
        return Err(OdError::BadLevel(g.n).into());
    }
    match &cli.command {
        Command::Validate { term } => {
            let t = parse_term(term)?;
            let report = check_term(&t, g.n);
            emit_report(out, g.json, &report)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Cmp { a, b } => {
            let (a, b) = (parse_term(a)?, parse_term(b)?);
            let ord = match cmp_checked(&a, &b, g.n) {
                Ok(o) => o,
                Err(e @ OdError::InvalidDiagram(_)) => return Err(Failure { code: 1, message: e.to_string() }),
                Err(e) => return Err(e.into()),
            };
            let word = match ord {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            if g.json {
                writeln!(out, "{}", json!({ "result": word })).map_err(io_failure)?;
            } else {
                writeln!(out, "{}", word).map_err(io_failure)?;
            }
            Ok(0)
        }
        Command::Enum => {
            let mut cfg = EnumConfig::new(g.n, g.max_size);
            cfg.count_cap = g.count_cap;
            let e = enumerate_valid(&cfg);
            if g.json {
                let spellings: Vec<String> = e.terms.iter().map(|t| t.to_string()).collect();
                writeln!(out, "{}", json!({ "terms": spellings, "truncated": e.truncated })).map_err(io_failure)?;
            } else {
                for t in &e.terms {
                    writeln!(out, "{}", t).map_err(io_failure)?;
                }
            }
            Ok(0)
        }
        Command::Qpart { term } => {
            let t = parse_term(term)?;
            let ins = in_set(&t)?;
            let top = ins.iter().next_back().copied().unwrap_or(0);
            let levels: BTreeMap<u32, QView> = (2..=top).map(|j| derive(&t, j).map(|v| (j, v))).collect::<crate::Result<_>>()?;
            if g.json {
                writeln!(out, "{}", json!({ "subject": t, "in": ins, "levels": levels })).map_err(io_failure)?;
            } else {
                writeln!(out, "In = {{{}}}", ins.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")).map_err(io_failure)?;
                let show = |x: &Option<crate::Term>| x.as_ref().map(|t| t.to_string()).unwrap_or_else(|| String::from("-"));
                for (j, v) in &levels {
                    writeln!(out, "{}: pd = {}  st = {}  rg = {}{}", j, v.pd, show(&v.st), show(&v.rg), if v.defined_in { "" } else { "  (inherited)" })
                        .map_err(io_failure)?;
                }
            }
            Ok(0)
        }
        Command::ChainSynth => {
            let file = read_descriptor(g.desc.as_deref())?;
            let inputs = file.inputs.ok_or_else(|| usage("descriptor has no synthesis inputs (body, st_top)"))?;
            let (rho, report) = synth(&file.desc, &inputs)?;
            if g.json {
                writeln!(out, "{}", json!({ "rho": rho, "report": report })).map_err(io_failure)?;
            } else {
                writeln!(out, "rho = {}", rho).map_err(io_failure)?;
                emit_report(out, false, &report)?;
            }
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::ChainVerify => {
            let file = read_descriptor(g.desc.as_deref())?;
            let report = verify_rope_laws(&file.desc);
            emit_report(out, g.json, &report)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Selftest => {
            let seed = match std::env::var("OD_SEED") {
                Ok(s) => s.trim().parse().map_err(|_| usage(format!("OD_SEED is not an integer: `{}`", s)))?,
                Err(_) => g.seed.unwrap_or(DEFAULT_SEED),
            };
            let results = run_all(seed);
            let passed = results.iter().all(|r| r.passed);
            if g.json {
                writeln!(out, "{}", json!({ "seed": seed, "criteria": results, "passed": passed })).map_err(io_failure)?;
            } else {
                writeln!(out, "seed {}", seed).map_err(io_failure)?;
                for r in &results {
                    writeln!(out, "{}", r.line()).map_err(io_failure)?;
                }
            }
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn read_descriptor(path: Option<&str>) -> Result<DescriptorFile, Failure> {
    let path = path.ok_or_else(|| usage("--desc FILE is required"))?;
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read `{}`: {}", path, e)))?;
    parse_descriptor(&src).map_err(|e| usage(format!("{}: {}", path, e)))
}

fn emit_report(out: &mut dyn Write, as_json: bool, r: &ValidityReport) -> Result<(), Failure> {
    if as_json {
        let text = serde_json::to_string(r).map_err(|e| usage(e.to_string()))?;
        writeln!(out, "{}", text).map_err(io_failure)
    } else {
        writeln!(out, "{}: {}", r.subject, if r.valid { "valid" } else { "invalid" }).map_err(io_failure)?;
        for c in &r.checks {
            writeln!(out, "  {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.label, c.detail).map_err(io_failure)?;
        }
        Ok(())
    }
}
