//! `trineqkd`: simulate the double-trine protocol, export rate and security
//! curves, compute noise thresholds and run the structural checks.
//!
//! Exit codes: 0 success, 1 usage error, 2 invariant or solver failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use trine_qkd::curves::EpsGrid;
use trine_qkd::{KeyCase, Side};

#[derive(Parser, Debug)]
#[command(name = "trineqkd", version, about = "Double-trine reference-frame-free QKD toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Noise parameter of the common source, in [0, 1].
    #[arg(long, global = true, default_value_t = 0.0, value_parser = parse_epsilon)]
    pub epsilon: f64,

    /// Number of transmitted qubit pairs to simulate.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,

    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Noise grid as start:stop:step.
    #[arg(long, global = true, default_value = "0:0.35:0.005", value_parser = parse_grid)]
    pub grid: EpsGrid,

    #[arg(long = "case", global = true, value_enum, default_value_t = CaseArg::Both)]
    pub case: CaseArg,

    #[arg(long, global = true, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,

    /// Output file, or directory for commands that write several files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Defaults to csv, except json for `thresholds`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Analytic joint probability table at --epsilon.
    Probs,
    /// Sample a transmission record, generate the dual key and compare with theory.
    Simulate,
    /// Key rates and Eve's optimized Holevo bounds over --grid.
    Curves,
    /// Noise thresholds where Eve's bound meets Alice and Bob's information.
    Thresholds,
    /// Run the structural self-checks.
    Verify {
        /// Number of Haar-random rotations for the invariance check.
        #[arg(long, default_value_t = 100)]
        rff_samples: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseArg {
    Bit,
    Trit,
    Both,
}

impl CaseArg {
    pub fn cases(self) -> Vec<KeyCase> {
        match self {
            CaseArg::Bit => vec![KeyCase::Bit],
            CaseArg::Trit => vec![KeyCase::Trit],
            CaseArg::Both => KeyCase::BOTH.to_vec(),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    Alice,
    Bob,
    Both,
}

impl SideArg {
    pub fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Alice => vec![Side::Alice],
            SideArg::Bob => vec![Side::Bob],
            SideArg::Both => Side::BOTH.to_vec(),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let eps: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(format!("epsilon must lie in [0, 1], got {eps}"));
    }
    Ok(eps)
}

fn parse_grid(s: &str) -> Result<EpsGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    EpsGrid::new(num(start)?, num(stop)?, num(step)?).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
