use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spreadlab", version, about = "Influence maximization under the independent cascade model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic graph in edge-list format.
    Gen(GenArgs),
    /// Sample a snapshot set and store it as a cache file.
    Sample(SampleArgs),
    /// Select seeds and write one CSV row per iteration.
    Select(SelectArgs),
    /// Score a seed list on a fresh, independent snapshot set.
    Evaluate(EvaluateArgs),
    /// Run plain and dynamic-update static greedy on the same input.
    Bench(BenchArgs),
    /// Check monotonicity and submodularity of the snapshot estimate.
    Audit(AuditArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphModel {
    Er,
    Pa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProbModel {
    Uniform,
    Wc,
    Trivalency,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Static,
    StaticDu,
    Conventional,
    Degree,
    Random,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Static => "static",
            Algorithm::StaticDu => "static-du",
            Algorithm::Conventional => "conventional",
            Algorithm::Degree => "degree",
            Algorithm::Random => "random",
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file: "u v [p]" per line, '#' comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Probability for edges without one; with --prob-model uniform, for every edge.
    #[arg(long)]
    pub p: Option<f64>,
    /// Reassign every edge probability with this model.
    #[arg(long = "prob-model", value_enum)]
    pub prob_model: Option<ProbModel>,
    /// Master random seed. A clock-derived seed is chosen and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "avg-degree")]
    pub avg_degree: f64,
    #[arg(long, value_enum, default_value = "er")]
    pub model: GraphModel,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write this probability on every edge.
    #[arg(long)]
    pub p: Option<f64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long = "R", value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    #[arg(long, alias = "snapshots")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long = "algo", value_enum)]
    pub algorithm: Algorithm,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Snapshot count (per iteration for conventional; for scoring baselines).
    #[arg(long = "R", value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Snapshot cache: read when it matches, otherwise sampled and written.
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    /// Fill the sampling_ms and selection_ms columns.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated node labels.
    #[arg(long, value_delimiter = ',', required_unless_present = "from_csv", conflicts_with = "from_csv")]
    pub seeds: Vec<u64>,
    /// Take the chosen_node column of a `select` CSV.
    #[arg(long = "from-csv")]
    pub from_csv: Option<PathBuf>,
    #[arg(long = "eval-R", value_parser = clap::value_parser!(u64).range(1..))]
    pub eval_r: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long = "R", value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long = "R", value_parser = clap::value_parser!(u64).range(1..))]
    pub r: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
}
