//! The `eml` command line.
//!
//! Exit codes: 0 success, 1 bad input or failed check, 2 undefined value,
//! 3 undecided branch, 64 usage error.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::el::{compile, parse_term, CompiledExpr};
use crate::identities::{self, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::omega::{self, machine_by_name, machine_names, PrefixReading, SolveOptions, ToyMachine, Verdict};
use crate::rigor::decimal::{format_box, format_dyadic, format_exact};
use crate::rigor::{eval, eval_compiled, ComplexBox, Dyadic, EvalLimits, EvalOutcome};
use crate::syntax::{self, EmlExpr};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "eml", version, about = "Exp-Minus-Log expressions: parsing, compilation, certified evaluation")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print it canonically.
    Parse { expr: String },
    /// Print the expression with the given rank.
    Unrank { n: BigUint },
    /// Print the rank of an expression.
    Rank { expr: String },
    /// Compile an elementary term to an expression.
    Compile {
        #[arg(allow_hyphen_values = true)]
        term: String,
    },
    /// Evaluate an expression or elementary term with certified bounds.
    Eval(EvalArgs),
    /// Check the substitution templates on random samples.
    VerifyIdentities {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Halting-probability demonstrator on toy machines.
    #[command(subcommand)]
    Omega(OmegaCommand),
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(allow_hyphen_values = true)]
    input: String,
    /// Target precision in bits.
    #[arg(short = 'k', long = "bits", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    bits: u32,
    #[arg(long, default_value_t = 4096)]
    max_working_bits: u32,
    /// Also print exact dyadic endpoints.
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand, Debug)]
enum OmegaCommand {
    /// Dovetail and print every halt with the new lower bound.
    Run {
        machine: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Check prefix-freeness and sum 2^-|p| over short codes.
    Kraft {
        machine: String,
        #[arg(long, default_value_t = 16)]
        max_len: u32,
    },
    /// Decide halting of short programs from leading bits of omega.
    Solve {
        machine: String,
        #[arg(long)]
        prefix: String,
        #[arg(long)]
        max_len: Option<u32>,
        /// Read the prefix as the exact value rather than leading digits.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

enum Fail {
    Usage(String),
    Input(String),
    Io(io::Error),
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Io(e)
    }
}

type Res = Result<i32, Fail>;

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Fail::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Fail::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Fail::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    writeln!(out, "{v}")
}

fn parse_expr(text: &str) -> Result<EmlExpr, Fail> {
    syntax::parse(text).map_err(|e| Fail::Input(e.to_string()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Res {
    let json = cli.json;
    match &cli.command {
        Command::Parse { expr } => {
            let e = parse_expr(expr)?;
            if json {
                emit(out, &e.to_json())?;
            } else {
                writeln!(out, "{}", e.render())?;
            }
            Ok(0)
        }
        Command::Unrank { n } => {
            let e = syntax::unrank(n);
            if json {
                emit(out, &json!({"rank": n.to_string(), "expr": e.render(), "ast": e.to_json()}))?;
            } else {
                writeln!(out, "{}", e.render())?;
            }
            Ok(0)
        }
        Command::Rank { expr } => {
            let e = parse_expr(expr)?;
            let r = syntax::rank(&e);
            if json {
                emit(out, &json!({"expr": e.render(), "rank": r.to_string()}))?;
            } else {
                writeln!(out, "{r}")?;
            }
            Ok(0)
        }
        Command::Compile { term } => {
            let t = parse_term(term).map_err(|e| Fail::Input(e.to_string()))?;
            let c = compile(&t);
            let m = c.expr.metrics();
            let exact = c.exact.as_ref().map(|v| v.to_string());
            if json {
                emit(
                    out,
                    &json!({
                        "term": t.to_string(),
                        "expr": c.expr.render(),
                        "e_count": m.e_count,
                        "depth": m.depth,
                        "node_count": m.node_count,
                        "exact": exact,
                    }),
                )?;
            } else {
                writeln!(out, "{}", c.expr.render())?;
                writeln!(out, "e_count {}, depth {}, nodes {}", m.e_count, m.depth, m.node_count)?;
                writeln!(out, "exact {}", exact.as_deref().unwrap_or("none"))?;
            }
            Ok(0)
        }
        Command::Eval(a) => run_eval(a, json, out),
        Command::VerifyIdentities { samples, seed } => run_identities(*samples, *seed, json, out),
        Command::Omega(cmd) => run_omega(cmd, json, out),
    }
}

fn box_json(b: &ComplexBox) -> Value {
    json!({
        "re": {"lo": b.re_lo().to_fraction_string(), "hi": b.re_hi().to_fraction_string()},
        "im": {"lo": b.im_lo().to_fraction_string(), "hi": b.im_hi().to_fraction_string()},
        "decimal": format_box(b),
    })
}

fn run_eval(a: &EvalArgs, json: bool, out: &mut dyn Write) -> Res {
    if a.max_working_bits < a.bits {
        return Err(Fail::Usage(format!("--max-working-bits {} is below -k {}", a.max_working_bits, a.bits)));
    }
    let limits = EvalLimits {
        target_bits: a.bits,
        max_working_bits: a.max_working_bits,
        ..EvalLimits::new(a.bits)
    };
    // an EML expression is tried first; anything else is an elementary term
    let (expr, outcome) = match syntax::parse(&a.input) {
        Ok(e) => {
            let o = eval(&e, None, &limits);
            (e, o)
        }
        Err(pe) => {
            let c: CompiledExpr = match parse_term(&a.input) {
                Ok(t) => compile(&t),
                Err(te) => {
                    let msg = if a.input.trim_start().starts_with("E(") {
                        pe.to_string()
                    } else {
                        te.to_string()
                    };
                    return Err(Fail::Input(msg));
                }
            };
            let o = eval_compiled(&c, &limits);
            (c.expr, o)
        }
    };
    let code = match &outcome {
        EvalOutcome::Value(_) => 0,
        EvalOutcome::UndefinedAt { .. } => EXIT_UNDEFINED,
        EvalOutcome::BranchUndecided { .. } => EXIT_UNDECIDED,
    };
    if json {
        let body = match &outcome {
            EvalOutcome::Value(b) => json!({"outcome": "value", "box": box_json(b)}),
            EvalOutcome::UndefinedAt { path, reason } => {
                json!({"outcome": "undefined", "path": path.to_string(), "reason": reason})
            }
            EvalOutcome::BranchUndecided { path, last_box } => {
                json!({"outcome": "branch_undecided", "path": path.to_string(), "last_box": box_json(last_box)})
            }
        };
        emit(out, &json!({"expr": expr.render(), "bits": a.bits, "result": body}))?;
        return Ok(code);
    }
    match &outcome {
        EvalOutcome::Value(b) => {
            writeln!(out, "{}", format_box(b))?;
            if a.exact {
                writeln!(out, "{}", format_exact(b))?;
            }
        }
        EvalOutcome::UndefinedAt { path, reason } => writeln!(out, "undefined at {path}: {reason}")?,
        EvalOutcome::BranchUndecided { path, last_box } => {
            writeln!(out, "branch undecided at {path}")?;
            writeln!(out, "last box {}", format_exact(last_box))?;
        }
    }
    Ok(code)
}

fn run_identities(samples: usize, seed: u64, json: bool, out: &mut dyn Write) -> Res {
    let reports = identities::run_suite(seed, samples);
    let all = reports.iter().all(|r| r.ok());
    if json {
        let rows: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "identity": r.name,
                    "domain": r.domain,
                    "samples": r.samples,
                    "passed": r.passed,
                    "failures": r.failures,
                })
            })
            .collect();
        emit(out, &json!({"seed": format!("{seed:#x}"), "all_passed": all, "identities": rows}))?;
    } else {
        writeln!(out, "seed {seed:#x}, {samples} samples per identity")?;
        writeln!(out, "{:<22} {:<34} {:>9}  result", "identity", "domain", "passed")?;
        for r in &reports {
            let frac = format!("{}/{}", r.passed, r.samples);
            writeln!(out, "{:<22} {:<34} {frac:>9}  {}", r.name, r.domain, if r.ok() { "ok" } else { "FAIL" })?;
            for f in &r.failures {
                writeln!(out, "    {f}")?;
            }
        }
        writeln!(out, "{}", if all { "all identities hold" } else { "some identities failed" })?;
    }
    Ok(if all { 0 } else { EXIT_INPUT })
}

fn machine(name: &str) -> Result<Box<dyn ToyMachine>, Fail> {
    machine_by_name(name).ok_or_else(|| Fail::Usage(format!("unknown machine {name:?}; known: {}", machine_names().join(", "))))
}

fn omega_err(e: omega::OmegaError) -> Fail {
    Fail::Input(e.to_string())
}

fn gap_to_known(m: &dyn ToyMachine, mass: &Dyadic) -> Option<(String, BigRational)> {
    let (n, d) = m.known_omega()?;
    let w = BigRational::new(n.into(), d.into());
    Some((format!("{n}/{d}"), &w - mass.to_rational()))
}

fn run_omega(cmd: &OmegaCommand, json: bool, out: &mut dyn Write) -> Res {
    match cmd {
        OmegaCommand::Run { machine: name, budget } => {
            let m = machine(name)?;
            let bounds = omega::dovetail(m.as_ref(), *budget);
            let mass = bounds.last().map(|b| b.mass.clone()).unwrap_or_else(Dyadic::zero);
            let gap = gap_to_known(m.as_ref(), &mass);
            if json {
                let events: Vec<Value> = bounds
                    .iter()
                    .map(|b| {
                        let h = b.latest();
                        json!({
                            "program": h.program,
                            "payload": h.payload,
                            "steps": h.steps,
                            "round": b.dovetail_steps,
                            "mass": b.mass.to_fraction_string(),
                            "mass_decimal": format_dyadic(&b.mass),
                        })
                    })
                    .collect();
                emit(
                    out,
                    &json!({
                        "machine": m.name(),
                        "budget": budget,
                        "events": events,
                        "final_mass": mass.to_fraction_string(),
                        "known_omega": gap.as_ref().map(|g| g.0.clone()),
                        "gap": gap.as_ref().map(|g| g.1.to_string()),
                    }),
                )?;
                return Ok(0);
            }
            for b in &bounds {
                let h = b.latest();
                writeln!(
                    out,
                    "{} payload {} steps {} round {} mass {} = {}",
                    h.program,
                    h.payload,
                    h.steps,
                    b.dovetail_steps,
                    b.mass.to_fraction_string(),
                    format_dyadic(&b.mass)
                )?;
            }
            match gap {
                Some((w, g)) => writeln!(
                    out,
                    "final mass {} = {w} − {g} after {} halts in {budget} rounds",
                    mass.to_fraction_string(),
                    bounds.len()
                )?,
                None => writeln!(out, "final mass {} after {} halts in {budget} rounds", mass.to_fraction_string(), bounds.len())?,
            }
            Ok(0)
        }
        OmegaCommand::Kraft { machine: name, max_len } => {
            let m = machine(name)?;
            let s = omega::kraft_check(m.as_ref(), *max_len).map_err(omega_err)?;
            if json {
                emit(
                    out,
                    &json!({"machine": m.name(), "max_len": max_len, "prefix_free": true, "sum": s.to_fraction_string()}),
                )?;
            } else {
                writeln!(out, "prefix-free up to length {max_len}; sum of 2^-|p| = {} = {}", s.to_fraction_string(), format_dyadic(&s))?;
            }
            Ok(0)
        }
        OmegaCommand::Solve { machine: name, prefix, max_len, exact, budget } => {
            let m = machine(name)?;
            let mut opts = SolveOptions {
                reading: if *exact { PrefixReading::Exact } else { PrefixReading::Truncated },
                max_len: *max_len,
                ..SolveOptions::default()
            };
            if let Some(b) = budget {
                opts.budget = *b;
            }
            let sol = omega::halting_from_omega_prefix(m.as_ref(), prefix, &opts).map_err(omega_err)?;
            let mut rows: Vec<(&String, &Verdict)> = sol.verdicts.iter().collect();
            rows.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
            let payload = |code: &str| m.decode(code).map(|p| p.to_string()).unwrap_or_default();
            if json {
                let vs: Vec<Value> = rows
                    .iter()
                    .map(|(code, v)| match v {
                        Verdict::Halts { steps } => json!({"program": code, "payload": payload(code), "halts": true, "steps": steps}),
                        Verdict::Loops => json!({"program": code, "payload": payload(code), "halts": false}),
                    })
                    .collect();
                emit(
                    out,
                    &json!({
                        "machine": m.name(),
                        "prefix": prefix,
                        "mass": sol.mass.to_fraction_string(),
                        "rounds": sol.dovetail_steps,
                        "verdicts": vs,
                    }),
                )?;
                return Ok(0);
            }
            for (code, v) in rows {
                match v {
                    Verdict::Halts { steps } => writeln!(out, "{code} payload {} halts after {steps} steps", payload(code))?,
                    Verdict::Loops => writeln!(out, "{code} payload {} never halts", payload(code))?,
                }
            }
            writeln!(out, "decided at mass {} after {} rounds", sol.mass.to_fraction_string(), sol.dovetail_steps)?;
            Ok(0)
        }
    }
}
