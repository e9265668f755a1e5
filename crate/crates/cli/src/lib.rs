//! Command-line front end for `spreadlab`.
//!
//! [`run`] parses an argument vector, executes one command and returns the
//! process exit status: 0 on success, 1 when a certification or check fails,
//! 2 on bad input or an unmet precondition, 3 when a work budget is exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spreadlab::{Budget, Error};

mod commands;
mod output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about = "Exact and Monte Carlo experiments on spread hypergraphs")]
pub struct Cli {
    /// Worker threads; defaults to the number of available processors.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Most candidate sets exact certification may generate.
    #[arg(long, global = true, env = "SPREADLAB_BUDGET_CANDIDATES")]
    pub budget_candidates: Option<u128>,

    /// Largest exhaustive enumeration allowed elsewhere.
    #[arg(long, global = true, env = "SPREADLAB_BUDGET_ENUMERATION")]
    pub budget_enumeration: Option<u128>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn budget(&self) -> Budget {
        Budget {
            candidates: self.budget_candidates.unwrap_or(Budget::DEFAULT_CANDIDATES),
            enumeration: self.budget_enumeration.unwrap_or(Budget::DEFAULT_ENUMERATION),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a hypergraph from one of the built-in families.
    Generate(GenerateArgs),
    /// Check a spread condition exactly or by sampling.
    Certify(CertifyArgs),
    /// Smallest q for which the hypergraph is q-spread or tiered-spread.
    MinSpread(MinSpreadArgs),
    /// Run the random fragmentation process.
    Fragment(FragmentArgs),
    /// Count k-bad pairs exhaustively.
    Badpairs(BadpairsArgs),
    /// Expected number of edges inside S plus a random set.
    Expectation(ExpectationArgs),
    /// Estimate containment probabilities of random vertex sets.
    Threshold(ThresholdArgs),
    /// Evaluate the closed-form containment bounds.
    Bounds(BoundsArgs),
    /// Run the acceptance checks.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Complete,
    Matchings,
    Hamilton,
    HamiltonSq,
    Copies,
    Random,
}

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Edge size (complete, random).
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of edges (random).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pattern graph for `copies`, as a 2-uniform hypergraph file.
    #[arg(long)]
    pub f: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyMode {
    Q,
    Tiered,
    Multilevel,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub mode: CertifyMode,
    #[arg(long)]
    pub q: Option<String>,
    /// Comma-separated `q_1, ..., q_(l-1)` for multilevel mode.
    #[arg(long)]
    pub q_list: Option<String>,
    #[arg(long)]
    pub r_seq: Option<String>,
    #[arg(long)]
    pub input: PathBuf,
    /// Examine every candidate set (the default).
    #[arg(long, conflicts_with = "samples")]
    pub exact: bool,
    /// Examine this many random candidate sets instead.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct MinSpreadArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Minimise over the tiered condition for this r-sequence instead.
    #[arg(long)]
    pub r_seq: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct FragmentArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub r_seq: String,
    #[arg(long)]
    pub q: String,
    #[arg(long = "C")]
    pub c: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run this many traces with derived seeds, one JSON record per line.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Attach a structural audit to each trace.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BadpairsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long = "C")]
    pub c: String,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub pn: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExpectationArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Index of the edge used as `S`.
    #[arg(long, conflicts_with = "s")]
    pub edge: Option<usize>,
    /// `S` as comma-separated labels; must be an edge.
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub w: usize,
    #[arg(long)]
    pub k: usize,
    /// Also average over every random set and compare.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, required_unless_present = "trace")]
    pub input: Option<PathBuf>,
    /// Sample against the last hypergraph of a fragmentation trace.
    #[arg(long, conflicts_with = "input")]
    pub trace: Option<PathBuf>,
    /// Comma-separated sizes; `a..b` is an inclusive range.
    #[arg(long)]
    pub sizes: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// Add exact containment probabilities where affordable.
    #[arg(long)]
    pub exact: bool,
    /// Bound parameters, e.g. `C=8,q=1/10,rseq=3,1,alpha=1/2,K0=5`.
    #[arg(long)]
    pub bounds: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long = "C")]
    pub c: String,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub r_seq: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long = "K0")]
    pub k0: Option<String>,
    /// Per-level `q_i`, one per entry of the r-sequence.
    #[arg(long)]
    pub q_list: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteProfile {
    Quick,
    Full,
}

#[derive(Args, Debug, Serialize)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub profile: SuiteProfile,
    /// Comma-separated criterion ids; all by default.
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Precondition(_) => EXIT_INPUT,
        Error::Resource { .. } => EXIT_RESOURCE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("spreadlab: cannot start worker pool: {e}");
            return EXIT_INPUT;
        }
    };
    match pool.install(|| commands::dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spreadlab: {e}");
            exit_code(&e)
        }
    }
}
