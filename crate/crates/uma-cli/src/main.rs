//! `uma`: run simulation batches, verify invariants against brute-force
//! oracles, and inspect snapshot checkpoints.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod config;
mod inspect;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "uma", version, about = "Default-implication learners on median-graph model spaces")]
struct Cli {
    #[command(flatten)]
    log: LogArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct LogArgs {
    /// More progress output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Only results and errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    quiet: bool,
}

impl LogArgs {
    fn level(self) -> u8 {
        if self.quiet {
            0
        } else {
            1 + self.verbose
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a configured batch and write CSV logs plus checkpoints.
    Simulate {
        /// TOML run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "uma-out")]
        out: PathBuf,
        /// Master seed, overriding `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the invariant suites against the brute-force oracles.
    Verify {
        /// Reduced suite without simulation batches.
        #[arg(long)]
        quick: bool,
        /// Master seed for instance generation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving `counterexamples.txt` on failure.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Suite to leave out (repeatable).
        #[arg(long, value_name = "SUITE")]
        skip: Vec<String>,
    },
    /// Print the derived relation, negligibles, minset and quotient size of a checkpoint.
    Inspect {
        /// Checkpoint file.
        path: PathBuf,
        /// Threshold for real snapshots.
        #[arg(long, default_value_t = 0.025)]
        tau: f64,
        /// Derivation tolerance for qualitative snapshots.
        #[arg(long, default_value_t = 0)]
        delta: u32,
        /// Also enumerate the dual and report its size.
        #[arg(long)]
        dual: bool,
    },
}

/// Failure classes mapped to exit codes.
pub enum Failure {
    Verification,
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

/// Progress messages on stderr, filtered by verbosity.
#[derive(Clone, Copy)]
pub struct Log(u8);

impl Log {
    pub fn info(self, msg: impl std::fmt::Display) {
        if self.0 >= 1 {
            eprintln!("uma: {msg}");
        }
    }

    pub fn debug(self, msg: impl std::fmt::Display) {
        if self.0 >= 2 {
            eprintln!("uma: {msg}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let log = Log(cli.log.level());
    let res = match cli.cmd {
        Command::Simulate { config, out, seed } => simulate::run(&config, &out, seed, log),
        Command::Verify { quick, seed, out, skip } => verify::run(quick, seed, &out, &skip, log),
        Command::Inspect { path, tau, delta, dual } => inspect::run(&path, tau, delta, dual),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("uma: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
