use std::path::PathBuf;

use cellbench::dataset::Role;
use cellbench::scoring::FamilyKind;
use clap::{Args, Parser, Subcommand};

pub const ROOT_ENV: &str = "CELLBENCH_ROOT";
pub const SEED_ENV: &str = "CELLBENCH_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "cellbench", version, about = "Synthetic cell benchmark for explanation heatmaps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the train/validation/evaluation shards.
    Generate(GenerateArgs),
    /// Score candidate heatmaps against the ground truth and write CSV records.
    Score(ScoreArgs),
    /// Build scatter and ROC tables and heatmap galleries from score CSVs.
    Report(ReportArgs),
    /// Write a mock method's heatmaps as a heatmap archive.
    ExportMock(ExportMockArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Dataset root directory.
    #[arg(long, env = ROOT_ENV, default_value = "data")]
    pub root: PathBuf,
    /// Base seed.
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Image side length in pixels.
    #[arg(long, default_value_t = 224)]
    pub size: usize,
    #[arg(long, default_value_t = 32)]
    pub train_shards: usize,
    #[arg(long, default_value_t = 8)]
    pub validation_shards: usize,
    #[arg(long, default_value_t = 8)]
    pub evaluation_shards: usize,
    #[arg(long, default_value_t = 200)]
    pub samples_per_shard: usize,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    /// Threshold family; `--clamp` implies `clamped`.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Clamp bounds applied after the first normalization.
    #[arg(long, num_args = 2, value_names = ["C1", "C2"], allow_negative_numbers = true)]
    pub clamp: Option<Vec<f64>>,
    /// Take absolute values of the candidate before channel adjustment.
    #[arg(long)]
    pub abs: bool,
    /// Count a wrong-band-zero pixel as both FN and FP.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Method tag: `mock:<kind>` or the name of an archive under `--heatmaps`.
    #[arg(long = "method", required = true)]
    pub methods: Vec<String>,
    /// Directory holding one heatmap archive per method tag (default `<root>/heatmaps`).
    #[arg(long)]
    pub heatmaps: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RoleArg::Evaluation)]
    pub role: RoleArg,
    /// Score only the first N shards.
    #[arg(long)]
    pub max_shards: Option<usize>,
    /// Results directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    /// Results directory holding the score CSVs; outputs are written here too.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long)]
    pub heatmaps: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RoleArg::Evaluation)]
    pub role: RoleArg,
    /// Shard the gallery samples are taken from.
    #[arg(long, default_value_t = 0)]
    pub gallery_shard: usize,
    /// Skip gallery rendering (tables only; no dataset needed).
    #[arg(long)]
    pub no_gallery: bool,
}

#[derive(Debug, Args)]
pub struct ExportMockArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mock tag, e.g. `mock:dropout:0.3`.
    #[arg(long)]
    pub method: String,
    /// Archive name written to the archive manifest.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, value_enum, default_value_t = RoleArg::Evaluation)]
    pub role: RoleArg,
    #[arg(long)]
    pub max_shards: Option<usize>,
    /// Archive directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    Standard,
    Clamped,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Standard => FamilyKind::Standard,
            FamilyArg::Clamped => FamilyKind::Clamped,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RoleArg {
    Train,
    Validation,
    Evaluation,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Train => Role::Train,
            RoleArg::Validation => Role::Validation,
            RoleArg::Evaluation => Role::Evaluation,
        }
    }
}
