//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 precondition violation,
//! 3 internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{demorgan_to_u2, nonconfluence_witness, u2_to_demorgan, BasisError};
use crate::circuit::text::{parse_circuit, serialize_circuit};
use crate::circuit::{evaluate, isomorphic, truth_table, validate, Assignment, Basis, Circuit, Violation};
use crate::formula::{check_convergence, Trs};
use crate::refuter::{refute, schnorr_exhaustive_check, RefuteError};
use crate::rewrite::{normalize_circuit, RewriteError, Strategy};

#[derive(Debug, Parser)]
#[command(name = "gatelim", version, about = "Gate elimination by convergent circuit rewriting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Term rewriting system utilities.
    Trs {
        #[command(subcommand)]
        command: TrsCommand,
    },
    /// Rewrite a DeMorgan circuit to normal form and print it.
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Det)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one JSON object per rewrite step.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate a circuit on one input, x1 first (e.g. `101`).
    Eval {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Find an input where an undersized circuit differs from parity.
    Refute {
        file: PathBuf,
        /// Write one JSON object per search iteration.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Translate between the DeMorgan and U2 bases.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: BasisArg,
    },
    /// Exhaustively check that no two-gate circuit computes XOR of two inputs.
    SchnorrCheck,
    /// Show the two non-isomorphic results of removing a U2 negation gate.
    DemoNonconfluence,
    /// Check a circuit file and report every violated invariant.
    Validate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TrsCommand {
    /// Check critical-pair joinability and the termination weight.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random ground instances per rule.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Det,
    Rand,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisArg {
    U2,
    Demorgan,
}

/// Failure of a command together with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Failure {
        match e {
            RewriteError::WrongBasis | RewriteError::MissingInput(_) => Failure::precondition(e.to_string()),
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<RefuteError> for Failure {
    fn from(e: RefuteError) -> Failure {
        match e {
            RefuteError::Precondition(_) | RefuteError::MissingInput(_) => Failure::precondition(e.to_string()),
            RefuteError::Rewrite(r) => r.into(),
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<BasisError> for Failure {
    fn from(e: BasisError) -> Failure {
        match e {
            BasisError::Internal(_) | BasisError::Rewrite(_) | BasisError::Invalid(_) | BasisError::Circuit(_) => {
                Failure::internal(e.to_string())
            }
            BasisError::Parse(_) => Failure::usage(e.to_string()),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Circuit, Failure> {
    parse_circuit(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<(), Failure> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).map_err(|e| Failure::internal(e.to_string()))?);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Run a parsed command, writing normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let mut say = |s: String| writeln!(out, "{s}").map_err(|e| Failure::internal(e.to_string()));
    match cli.command {
        Command::Trs { command: TrsCommand::Check { seed, samples } } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = check_convergence(&Trs::demorgan(), samples, &mut rng)
                .map_err(|e| Failure::internal(e.to_string()))?;
            say(format!("rules: {}", report.rules))?;
            say(format!("critical pairs: {} ({} joinable)", report.critical_pairs, report.joinable_pairs))?;
            for bad in &report.non_joinable {
                say(format!("  not joinable: {bad}"))?;
            }
            let decreasing = report.symbolic_decrease.iter().filter(|d| d.strictly_decreasing()).count();
            say(format!("weight decrease: {decreasing}/{} rules", report.rules))?;
            say(format!(
                "sampled instances: {} ({} failures)",
                report.sampled_instances,
                report.sampled_failures.len()
            ))?;
            if !report.convergent() {
                return Err(Failure::internal("the rewriting system is not convergent"));
            }
            say("convergent".into())
        }
        Command::Normalize { file, strategy, seed, trace } => {
            let c = load(&file)?;
            let strategy = match strategy {
                StrategyArg::Det => Strategy::Deterministic,
                StrategyArg::Rand => Strategy::SeededRandom(seed),
            };
            let (n, records) = normalize_circuit(&c, strategy)?;
            if let Some(path) = trace {
                write_jsonl(&path, &records)?;
            }
            say(serialize_circuit(&n).trim_end().to_string())
        }
        Command::Eval { file, input } => {
            let c = load(&file)?;
            let a: Assignment = input.parse().map_err(|e: crate::circuit::CircuitError| Failure::usage(e.to_string()))?;
            let v = evaluate(&c, &a).map_err(|e| Failure::usage(e.to_string()))?;
            say(if v { "1" } else { "0" }.into())
        }
        Command::Refute { file, trace } => {
            let c = load(&file)?;
            let r = refute(&c)?;
            if let Some(path) = trace {
                write_jsonl(&path, &r.trace)?;
            }
            say(r.counterexample.input.to_string())
        }
        Command::Translate { file, to } => {
            let c = load(&file)?;
            let t = match (to, c.basis()) {
                (BasisArg::U2, Basis::DeMorgan) => demorgan_to_u2(&c)?,
                (BasisArg::Demorgan, Basis::U2) => u2_to_demorgan(&c)?,
                (_, b) => return Err(Failure::precondition(format!("circuit is already in basis {b}"))),
            };
            say(serialize_circuit(&t).trim_end().to_string())
        }
        Command::SchnorrCheck => {
            let r = schnorr_exhaustive_check();
            say(format!(
                "enumerated {} circuits on {} inputs with at most {} binary gates",
                r.circuits_enumerated, r.inputs, r.max_gates
            ))?;
            say(format!("distinct functions realized: {}", r.functions_realized))?;
            say(format!("XOR realized: {}", r.xor_realized))?;
            say(format!("AND realized: {}", r.and_realized))?;
            say(format!("{}-gate XOR circuit correct: {}", r.upper_bound_gates, r.upper_bound_correct))?;
            if !r.holds() {
                return Err(Failure::internal("the bound does not hold"));
            }
            say("bound holds".into())
        }
        Command::DemoNonconfluence => {
            let w = nonconfluence_witness()?;
            let tt = |c: &Circuit| truth_table(c).map_err(|e| Failure::internal(e.to_string()));
            let equal = tt(&w.pushed_up)? == tt(&w.pushed_down)? && tt(&w.original)? == tt(&w.pushed_up)?;
            let iso = isomorphic(&w.pushed_up, &w.pushed_down);
            say("# witness".into())?;
            say(serialize_circuit(&w.original).trim_end().to_string())?;
            say("# pushed up".into())?;
            say(serialize_circuit(&w.pushed_up).trim_end().to_string())?;
            say("# pushed down".into())?;
            say(serialize_circuit(&w.pushed_down).trim_end().to_string())?;
            say(format!("truth tables: {}", if equal { "equal" } else { "different" }))?;
            say(format!("isomorphic: {iso}"))?;
            if !equal || iso {
                return Err(Failure::internal("the witness does not show non-confluence"));
            }
            Ok(())
        }
        Command::Validate { file } => {
            let c = load(&file)?;
            let violations: Vec<Violation> = validate(&c);
            if violations.is_empty() {
                say(format!("valid: {} edges, {} binary gates", c.edge_count(), c.size()))
            } else {
                Err(Failure::precondition(
                    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"),
                ))
            }
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit
/// code.
pub fn main_with_args<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
