use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use epkit::{DEFAULT_EQ_ATOL, DEFAULT_RANK_RTOL};

#[derive(Debug, Parser)]
#[command(
    name = "epkit",
    version,
    about = "Classify matrices and check EP-operator properties"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_RTOL)]
    pub tol_rank: f64,
    /// Absolute tolerance for residual and subspace comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_EQ_ATOL)]
    pub tol_eq: f64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock times. Off by default so reports are reproducible byte for byte.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a square matrix read from a matrix file.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the randomized check of one property.
    Verify {
        #[arg(value_name = "THEOREM", required_unless_present = "theorem")]
        theorem_id: Option<String>,
        #[arg(long, conflicts_with = "theorem_id")]
        theorem: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every property check.
    Suite {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Tabulate a model family over its truncations.
    Model {
        #[arg(value_name = "FAMILY", required_unless_present = "family")]
        family_id: Option<String>,
        #[arg(long, conflicts_with = "family_id")]
        family: Option<String>,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    /// Defaults to dim - 2.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = "EPKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Replace EP instances with non-EP ones to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

impl RunArgs {
    pub fn rank(&self) -> usize {
        self.rank.unwrap_or(self.dim.saturating_sub(2))
    }
}
