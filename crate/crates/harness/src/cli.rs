//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::grid::RGrid;

#[derive(Debug, Parser)]
#[command(
    name = "gpoly",
    version,
    about = "Experiments on the gamma-weight random polymer"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Base seed of the counter-based random streams.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Worker threads (0: one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Directory receiving CSV and JSON output.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Monte-Carlo replicas (subcommand-specific default).
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// Write the run summary as JSON and print it to stdout.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Default for Common {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            threads: 0,
            out: PathBuf::from("."),
            replicas: None,
            json: false,
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Table of saddle-point constants over a (c, γ) grid.
    Constants(ConstantsArgs),
    /// Exact finite-size identities on random small matrices.
    VerifyIdentities(IdentitiesArgs),
    /// Laplace transform by Monte Carlo and three determinant routes.
    LaplaceCheck(LaplaceArgs),
    /// Law of large numbers for zero-temperature passage times.
    Lln(LlnArgs),
    /// Passage times against the smallest Wishart eigenvalue.
    LueCompare(LueArgs),
    /// Fluctuations of ln Z against the Tracy–Widom law.
    Tw(TwArgs),
    /// Tabulate the Tracy–Widom distribution function.
    TwTable(TwTableArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::LaplaceCheck(_) => "laplace-check",
            Command::Lln(_) => "lln",
            Command::LueCompare(_) => "lue-compare",
            Command::Tw(_) => "tw",
            Command::TwTable(_) => "tw-table",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ConstantsArgs {
    /// Aspect ratios c > 1.
    #[arg(long = "c", value_delimiter = ',', default_values_t = vec![1.5, 2.0, 3.0, 4.0])]
    pub c: Vec<f64>,
    /// Shapes γ > 0.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.001, 0.01, 0.1, 0.2, 0.3, 0.5])]
    pub gamma: Vec<f64>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct IdentitiesArgs {
    /// Random matrices for the gRSK identities.
    #[arg(long, default_value_t = 200)]
    pub matrices: usize,
    /// Largest row count h of the gRSK matrices.
    #[arg(long, default_value_t = 6)]
    pub max_h: usize,
    /// Largest column count n of the gRSK matrices.
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    /// Random polymer instances for the recursion-vs-enumeration check.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Largest side of those instances.
    #[arg(long, default_value_t = 6)]
    pub max_side: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct LaplaceArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Perturbation a_j = ε j, b_i = γ - ε i.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Laplace variables s ≥ 0.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.5, 1.0, 2.0])]
    pub s: Vec<f64>,
    /// Gauss–Legendre nodes per contour panel.
    #[arg(long, default_value_t = 48)]
    pub order: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct LlnArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long = "n", value_delimiter = ',', default_values_t = vec![250, 500, 1000])]
    pub n: Vec<usize>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct LueArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TwArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5])]
    pub gamma: Vec<f64>,
    #[arg(long = "n", value_delimiter = ',', default_values_t = vec![50, 100, 200])]
    pub n: Vec<usize>,
    /// Points at which the empirical and limiting CDFs are reported.
    #[arg(long, default_value = "-6:4:0.25")]
    pub r_grid: RGrid,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TwTableArgs {
    #[arg(long, default_value = "-15:10:0.25")]
    pub r_grid: RGrid,
    /// Wedge truncation.
    #[arg(long = "M", default_value_t = 12.0)]
    pub m: f64,
    /// Gauss–Legendre nodes per panel.
    #[arg(long, default_value_t = 24)]
    pub order: usize,
}
