use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptmoments::ensemble::Ensemble;

#[derive(Debug, Parser)]
#[command(
    name = "ptmoments",
    version,
    about = "Two-qubit entanglement from partial-transpose moments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Negativity, concurrence, witness and bounds of a state file
    Measure {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Makhlin invariants and derived combinations of a state file
    Invariants {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// One reference X-state case, or a CSV sweep over a case
    Xstate(XstateArgs),
    /// Exact vs noisy moments over random states, as CSV
    NoiseStudy(NoiseArgs),
    /// Witness counterexamples to LOCC monotonicity and convexity
    Counterexample {
        #[arg(value_enum)]
        which: Counterexample,
    },
    /// Draw a random state and write it as a state file
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Measure::Hs)]
        measure: Measure,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["case", "sweep"]))]
pub struct XstateArgs {
    /// Case id (1..=8) to build from --params
    #[arg(long, requires = "params")]
    pub case: Option<u8>,
    /// Free parameters of the case, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub params: Vec<f64>,
    /// Case id (1..=8) to sweep
    #[arg(long, conflicts_with = "case")]
    pub sweep: Option<u8>,
    /// Number of sweep points
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Maximal relative error of each moment
    #[arg(long = "rel-noise", allow_negative_numbers = true)]
    pub rel_noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Measure::MixedRank)]
    pub measure: Measure,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Quantity {
    Negativity,
    Witness,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Counterexample {
    Locc,
    Convexity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Measure {
    Hs,
    Bures,
    MixedRank,
}

impl From<Measure> for Ensemble {
    fn from(m: Measure) -> Self {
        match m {
            Measure::Hs => Ensemble::HilbertSchmidt,
            Measure::Bures => Ensemble::Bures,
            Measure::MixedRank => Ensemble::MixedRank,
        }
    }
}
