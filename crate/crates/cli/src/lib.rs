//! Command-line front end for `resval-core`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 mathematical
//! precondition failure, 3 a checked invariant failed.

pub mod commands;
pub mod output;
pub mod parse;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{run, Outcome};
pub use parse::{parse_polynomial, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("--{arg}: {err}")]
    Parse { arg: &'static str, err: ParseError },
    #[error("{0}")]
    Math(resval_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use resval_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io(_) => 1,
            CliError::Math(E::TooLarge(_) | E::Invalid(_)) => 1,
            CliError::Math(_) => 2,
        }
    }
}

impl From<resval_core::Error> for CliError {
    fn from(e: resval_core::Error) -> Self {
        CliError::Math(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Real,
    Integral,
}

impl From<KindArg> for resval_core::resolution::Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Real => Self::Real,
            KindArg::Integral => Self::Integral,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "resval",
    version,
    about = "p-adic valuation of resultants: invariants, bounds and extremal pairs"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// First monic polynomial, e.g. "x^2+5*x+6" or "[6,5,1]".
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Second monic polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// The prime.
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants and every lower bound for v_p(res(f, g)).
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        /// Also run the invariant table and fail with exit code 3 on a failure.
        #[arg(long)]
        check: bool,
    },
    /// Minimal resolution of a weight.
    Resolution {
        /// The weight; a fraction "a/b" is accepted for real resolutions.
        #[arg(long)]
        omega: String,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Integral)]
        kind: KindArg,
    },
    /// Build the extremal pair for (p, k1, k2) and verify it.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
    },
    /// Exhaustive minimum of <a, b> on a truncated tree.
    TreeMin {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        omega_a: u64,
        #[arg(long)]
        omega_b: u64,
        #[arg(long)]
        depth: u32,
    },
    /// Seeded or exhaustive corpus run with invariant checking.
    Corpus(CorpusArgs),
    /// The characteristic double sum for a pair.
    ChiSum {
        #[command(flatten)]
        pair: PairArgs,
        /// Truncate the outer sum at this level instead of the default.
        #[arg(long)]
        max_t: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    #[arg(long, default_value_t = 1)]
    pub degree_min: usize,
    #[arg(long, default_value_t = 3)]
    pub degree_max: usize,
    #[arg(long, default_value_t = 20)]
    pub coeff_bound: i64,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3])]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Enumerate every pair in range instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// JSONL output file, one record per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the invariant table; only bound violations are checked.
    #[arg(long)]
    pub skip_invariants: bool,
    /// Number of tightest instances listed in the summary.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}
