use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qresource::{Complex64, Protocol};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "qresource", version, about = "Teleportation and dense coding suitability of qubit resources")]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Residual threshold for the suitability conditions.
    #[arg(long, global = true, value_name = "REAL")]
    tolerance: Option<f64>,

    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog state name (see `qresource catalog`).
    #[arg(long)]
    name: Option<String>,

    /// State file: {"n_qubits": n, "amplitudes": [[re, im], ...]}.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one protocol's closed-form conditions.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        protocol: Protocol,
    },
    /// Class, canonical form, entropies, tangle and verdicts of a three-qubit state.
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Canonical five-term form and the local unitaries reaching it.
    Schmidt {
        #[command(flatten)]
        source: Source,
    },
    /// SLOCC class of a three-qubit state.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Local-unitary invariants: single-qubit entropies and three-tangle.
    Invariants {
        #[command(flatten)]
        source: Source,
    },
    /// Run a protocol outcome by outcome.
    Simulate {
        kind: SimKind,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        unknown: UnknownArgs,
        /// Dense coding payload size when no message is given.
        #[arg(long)]
        bits: Option<usize>,
        /// Dense coding message, e.g. 101.
        #[arg(long)]
        message: Option<String>,
        /// Sampled runs to draw on top of the exact outcome table.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Check that a verdict survives random local unitaries.
    LuTest {
        #[arg(long, required_unless_present = "witness")]
        protocol: Option<Protocol>,
        #[arg(long, conflicts_with = "file", required_unless_present_any = ["file", "witness"])]
        name: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Print the fixed three-bit dense coding counterexample instead.
        #[arg(long, conflicts_with_all = ["name", "file"])]
        witness: bool,
    },
    /// Verdict table over the whole catalog, cross-checked against stored expectations.
    Matrix,
    /// List the catalog, show one entry, or export it as JSON.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        /// Print the catalog JSON.
        #[arg(long, conflicts_with = "write")]
        export: bool,
        /// Write the catalog JSON to this path.
        #[arg(long, value_name = "PATH")]
        write: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct UnknownArgs {
    /// Amplitude of |0⟩, e.g. 0.6 or 0.6+0.1i.
    #[arg(long, requires = "beta", allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    /// Amplitude of |1⟩.
    #[arg(long, requires = "alpha", allow_hyphen_values = true)]
    beta: Option<Complex64>,
    /// Draw the qubit from the seed (the default when no amplitudes are given).
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    random_unknown: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SimKind {
    Teleport,
    Sdc,
    Bennett,
    Nielsen,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(text) = &failure.stdout {
                print!("{text}");
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
