//! `hsol`: command-line access to the hsol-core library.
//!
//! Every command prints one JSON report on stdout and a one-line summary on
//! stderr. Exit status is 0 on success, 1 when a checked property fails and
//! 2 on bad input.

mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hsol_core::Error;

#[derive(Parser, Debug)]
#[command(name = "hsol", version, about = "Heisenberg groups, r-adic integers, solenoids and sub-Riemannian estimates")]
pub struct Cli {
    /// Print compact JSON and no summary line.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure of the finite groups H_n(Z/kZ).
    Group(GroupArgs),
    /// Group law on a single pair of points.
    Heis(HeisArgs),
    /// r-adic absolute values, integers and products.
    Radic(RadicArgs),
    /// Coherent sequences of finite quotients.
    Profinite(ProfiniteArgs),
    /// Truncated Heisenberg solenoids over the rationals.
    Solenoid(SolenoidArgs),
    /// Estimate the sub-Riemannian distance from the identity (or --from).
    Ccdist(CcArgs),
    /// Monte Carlo growth exponent of quasi-norm balls.
    Volume(VolumeArgs),
    /// Run the built-in property suites.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOp {
    Order,
    Center,
    Commutator,
    Index,
    Normal,
    Closure,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    pub op: GroupOp,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<u64>,
    /// Radix of the scaled and dilated subgroups; the group is H_n(Z/r^depth Z) when --k is absent.
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeisOp {
    Compose,
    Inverse,
    Conjugate,
    Commutator,
    Dilate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integer,
    Rational,
    Residue,
    Radic,
    Real,
}

#[derive(Args, Debug)]
pub struct HeisArgs {
    pub op: HeisOp,
    /// Coordinates x_1..x_n,y_1..y_n,t.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Second operand for compose, conjugate (the conjugating element) and commutator.
    #[arg(long, allow_hyphen_values = true)]
    pub other: Option<String>,
    #[arg(long, value_enum, default_value_t = RingKind::Integer)]
    pub ring: RingKind,
    /// Modulus for --ring residue.
    #[arg(long)]
    pub k: Option<String>,
    /// Radix for --ring radic.
    #[arg(long)]
    pub r: Option<String>,
    /// Precision for --ring radic.
    #[arg(long = "L")]
    pub l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub factor: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicOp {
    Abs,
    Dist,
    Add,
    Mul,
    Embed,
    Coherent,
}

#[derive(Args, Debug)]
pub struct RadicArgs {
    pub op: RadicOp,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub r: String,
    #[arg(long = "L")]
    pub l: Option<u32>,
    /// Comma-separated level values for `coherent`; entry l is read mod r^l.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfiniteOp {
    Embed,
    Check,
    Convert,
}

#[derive(Args, Debug)]
pub struct ProfiniteArgs {
    pub op: ProfiniteOp,
    /// Integer point x_1..x_n,y_1..y_n,t for `embed`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Group product element as JSON {"r", "L", "levels"} for `check` and `convert`.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long = "L")]
    pub l: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolenoidOp {
    Reduce,
    Project,
    Act,
    Shift,
    Preimages,
    Identify,
}

#[derive(Args, Debug)]
pub struct SolenoidArgs {
    pub op: SolenoidOp,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub r: String,
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,
    /// Rational coordinates x_1..x_n,y_1..y_n,t; defaults to the identity.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Acting element for `act`.
    #[arg(long, allow_hyphen_values = true)]
    pub by: Option<String>,
    /// Target level for `project`.
    #[arg(long)]
    pub level: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CcArgs {
    /// Real coordinates x_1..x_n,y_1..y_n,t.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Start point; the estimate is taken at point * from^{-1}.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub m: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct VolumeArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allowed distance between the measured and expected exponents.
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `all` or one of the module names.
    #[arg(long, default_value = "all")]
    pub scope: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of one command before it is wrapped into a report.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub summary: String,
    /// False when a checked property did not hold.
    pub holds: bool,
    pub seed: Option<u64>,
    pub numerical: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoFeasiblePath { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let started = Instant::now();
    match commands::run(&cli.command) {
        Ok(out) => {
            let mut provenance = json!({"version": env!("CARGO_PKG_VERSION"), "seed": out.seed});
            if out.numerical {
                provenance["runtime_ms"] = json!(started.elapsed().as_millis() as u64);
            }
            let report = json!({
                "command": name,
                "inputs": out.inputs,
                "result": out.result,
                "holds": out.holds,
                "provenance": provenance,
            });
            let text = if cli.json {
                serde_json::to_string(&report)
            } else {
                serde_json::to_string_pretty(&report)
            };
            // A closed stdout (e.g. piped into `head`) is not an error worth a panic.
            let _ = writeln!(std::io::stdout(), "{}", text.expect("reports serialize"));
            if !cli.json {
                eprintln!("{name}: {}", out.summary);
            }
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{name}: error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
