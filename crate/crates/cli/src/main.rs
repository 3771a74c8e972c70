//! `qdiscrim`: state discrimination, measurement schemes, no-signaling
//! simulation, and tomography from the command line.
//!
//! Every command is deterministic given its inputs and `--seed`. Exit
//! codes: 0 success, 2 domain-invalid input, 3 I/O or parse error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qdiscrim",
    version,
    about = "Finite-dimensional quantum measurement toolkit"
)]
struct Cli {
    /// RNG seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo trial count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    trials: u64,

    /// Grid resolution for brute-force oracles
    /// (defaults: 100 for helstrom, 200 for unambiguous).
    #[arg(long, global = true)]
    resolution: Option<usize>,

    /// Numeric tolerance for validity checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Report encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cross-check the closed form against its brute-force oracle.
    #[arg(long, global = true)]
    oracle: bool,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a POVM file against the effect axioms.
    Validate {
        /// JSON file with labeled outcome matrices.
        povm_file: PathBuf,
    },
    /// Optimal minimum-error discrimination of a pure state pair.
    Helstrom {
        /// JSON file with the two states to discriminate.
        pair_file: PathBuf,
        /// Prior probability of the first state (phi).
        #[arg(long, default_value_t = 0.5)]
        priors: f64,
    },
    /// Optimal unambiguous (never-wrong) discrimination of a state pair.
    Unambiguous {
        /// JSON file with the two states to discriminate.
        pair_file: PathBuf,
    },
    /// Simulate letter transmission through singlet measurements.
    Signal {
        /// Protocol file; omitted = x/y letters decided by the x-projector.
        protocol_file: Option<PathBuf>,
    },
    /// Analyze a probe-coupling measurement scheme on a pure state.
    Scheme {
        scheme_file: PathBuf,
        state_file: PathBuf,
    },
    /// Reconstruct a qubit state from tetrahedron-POVM statistics.
    Tomography {
        state_file: PathBuf,
        /// Outcome sample count; 0 = exact Born frequencies.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Build a phase twin and contrast sharp vs tetrahedron statistics.
    PhaseTwin {
        /// Pure qubit state file; omitted = |+,x>.
        state_file: Option<PathBuf>,
        /// Comma-separated phase per eigenvalue of s_z (default "0,pi").
        #[arg(long)]
        phases: Option<String>,
    },
}

/// Validated run settings shared by every command.
#[derive(Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: u64,
    pub resolution: Option<usize>,
    pub tolerance: f64,
    pub format: Format,
    pub oracle: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.trials < 1 {
            return Err(CliError::domain("--trials must be at least 1"));
        }
        if let Some(r) = self.resolution {
            if r < 10 {
                return Err(CliError::domain(format!(
                    "--resolution must be at least 10, got {r}"
                )));
            }
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(CliError::domain("--tol must be a positive real"));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Input parsed but violates a domain rule (exit 2).
    Domain(String),
    /// Unreadable file or malformed JSON (exit 3).
    Io(String),
}

impl CliError {
    pub fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self::Io(msg.into())
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            Self::Domain(_) => ExitCode::from(2),
            Self::Io(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Domain(m) | Self::Io(m) => m,
        }
    }
}

impl From<qdiscrim_core::Error> for CliError {
    fn from(e: qdiscrim_core::Error) -> Self {
        Self::Domain(e.to_string())
    }
}

/// QDISCRIM_THREADS caps rayon parallelism; 0 or unset = auto.
fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QDISCRIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::domain(format!(
            "QDISCRIM_THREADS must be an unsigned integer, got {raw:?}"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::domain(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        seed: cli.seed,
        trials: cli.trials,
        resolution: cli.resolution,
        tolerance: cli.tol,
        format: cli.format,
        oracle: cli.oracle,
        out: cli.out,
    };
    let run = init_thread_pool()
        .and_then(|()| config.validate())
        .and_then(|()| commands::run(&config, &cli.command));
    match run {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
