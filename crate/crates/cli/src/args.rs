use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Distinguishability of quantum channels: diamond norms, optimal
/// discriminating inputs and rank reduction.
#[derive(Debug, Parser)]
#[command(name = "qchan", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Convergence tolerance for the fidelity solver.
    #[arg(long, default_value_t = 1e-6, global = true)]
    pub tol: f64,
    /// Random restarts for nonconvex searches (oracle default: 64).
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000, global = true)]
    pub max_iters: usize,
    /// Worker threads for restarts. Output does not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Include solver traces in the output.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Read a single JSON document from stdin instead of file arguments.
    #[arg(long, global = true)]
    pub stdin: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a channel document in another representation.
    Convert {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        to: Repr,
        #[command(flatten)]
        common: Common,
    },
    /// Diamond norm of the difference of two channels.
    Dnorm {
        phi0: Option<PathBuf>,
        phi1: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Optimal discriminating input with its measurement.
    Discriminate {
        phi0: Option<PathBuf>,
        phi1: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Pure-input values of the Werner–Holevo or Pauli example, one JSON
    /// row per ancilla dimension.
    Example {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Comma-separated ancilla dimensions (default 1..=n).
        #[arg(long, value_delimiter = ',')]
        k_list: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Replace an input state by one of rank at most the rank of its output.
    RankReduce {
        channel: Option<PathBuf>,
        rho: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force reference values for small instances.
    Oracle {
        phi0: Option<PathBuf>,
        phi1: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Repr {
    Kraus,
    Choi,
    Stinespring,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Werner,
    Pauli,
}

pub fn parse() -> Result<Cli, clap::Error> {
    Cli::try_parse()
}
