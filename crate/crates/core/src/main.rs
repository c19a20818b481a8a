use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphfold::cli::{self, Outcome};
use graphfold::intlat::CoefficientRing;
use graphfold::selftest::DEFAULT_SEED;

/// Invariants and directed round fold maps of 3-dimensional graph manifolds.
#[derive(Parser)]
#[command(name = "graphfold", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology, cohomology, cup products and verdict for a manifold file.
    Compute {
        file: PathBuf,
        /// Coefficients: z, q or mod:<prime>.
        #[arg(long, default_value = "z", value_parser = parse_ring)]
        coeff: CoefficientRing,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the manifold admits a directed round fold map.
    Classify { file: PathBuf },
    /// Compare bundle(1,k) with S²×S¹ # S²×S¹ # bundle(0,k).
    Family {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in acceptance suites.
    Selftest {
        /// Deterministic golden suites only.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_ring(s: &str) -> Result<CoefficientRing, String> {
    s.parse().map_err(|e: cli::CliError| e.to_string())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                cli::EXIT_INPUT as u8
            } else {
                0
            });
        }
    };
    let Outcome {
        code,
        stdout,
        stderr,
    } = match args.command {
        Command::Compute { file, coeff, json } => cli::cmd_compute(&file, coeff, json),
        Command::Classify { file } => cli::cmd_classify(&file),
        Command::Family { k, json } => cli::cmd_family(k, json),
        Command::Selftest { quick, seed } => cli::cmd_selftest(quick, seed),
    };
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    let _ = std::io::stderr().write_all(stderr.as_bytes());
    ExitCode::from(code as u8)
}
