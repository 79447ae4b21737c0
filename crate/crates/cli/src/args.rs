use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "disguise",
    version,
    about = "Disguise image datasets and evaluate attacks on them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a secret key file.
    Keygen(KeygenArgs),
    /// Disguise a dataset with a key and write a DGT container.
    Disguise(DisguiseArgs),
    /// Undo the permutation and mixing of a disguised DGT container.
    Invert(InvertArgs),
    /// Score a disguised set with an examiner trained on original images.
    EvalVisual(EvalVisualArgs),
    /// Run the class-membership attack against a nearest-neighbour model or external predictions.
    EvalMembership(EvalMembershipArgs),
    /// Print keyspace size estimates in log2 units.
    Keyspace(KeyspaceArgs),
    /// Dump images as binary PGM/PPM files.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Idx,
    Cifar10,
    Dgt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixArg {
    Identity,
    Orthogonal,
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Clamp,
    Minmax,
}

/// A dataset on disk. IDX inputs need a separate label file.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Image file (IDX, CIFAR-10 binary batch or DGT; IDX may be gzipped).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    pub format: Format,
    /// IDX label file (required with --format idx).
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Number of classes for IDX inputs.
    #[arg(long, default_value_t = 10)]
    pub classes: usize,
    /// Keep only the first N records.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub channels: usize,
    #[arg(long, default_value_t = 28)]
    pub height: usize,
    #[arg(long, default_value_t = 28)]
    pub width: usize,
    #[arg(long, default_value_t = 7)]
    pub block_rows: usize,
    #[arg(long, default_value_t = 7)]
    pub block_cols: usize,
    #[arg(long, value_enum, default_value_t = MatrixArg::Orthogonal)]
    pub matrix: MatrixArg,
    /// Additive noise level on the 0-255 pixel scale.
    #[arg(long, default_value_t = 100.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 10)]
    pub classes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep blocks in place (block-wise mixing only).
    #[arg(long)]
    pub no_permute: bool,
    /// Keep class labels unchanged.
    #[arg(long)]
    pub no_label_permute: bool,
}

#[derive(Debug, Args)]
pub struct DisguiseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Base seed for per-image noise streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Disguised DGT container.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ExaminerArgs {
    /// Neighbours consulted by the nearest-neighbour model (odd).
    #[arg(long, default_value_t = 1)]
    pub knn_k: usize,
    /// Random training subsample size.
    #[arg(long)]
    pub subsample: Option<usize>,
    /// Seed for subsampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct EvalVisualArgs {
    /// Disguised set to score.
    #[command(flatten)]
    pub input: InputArgs,
    /// Key used to disguise --input; its label mapping is undone before scoring.
    #[arg(long)]
    pub key: PathBuf,
    /// Original-space training images for the examiner.
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    pub train_format: Format,
    #[arg(long)]
    pub train_labels: Option<PathBuf>,
    #[command(flatten)]
    pub examiner: ExaminerArgs,
}

#[derive(Debug, Args)]
pub struct EvalMembershipArgs {
    /// Two CSV files (in-training, out-training) with header "true_class,predicted_class".
    #[arg(long, num_args = 2, value_names = ["IN_CSV", "OUT_CSV"])]
    pub predictions: Option<Vec<PathBuf>>,
    /// Label count of the external model (with --predictions).
    #[arg(long, default_value_t = 10)]
    pub classes: usize,

    /// Model training set, in original or disguised space.
    #[arg(long, required_unless_present = "predictions")]
    pub train: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    pub train_format: Format,
    #[arg(long)]
    pub train_labels: Option<PathBuf>,
    /// Build the model from the first N training images of each class.
    #[arg(long)]
    pub train_per_class: Option<usize>,

    /// Probes from classes the model was trained on (original space).
    #[arg(long, required_unless_present = "predictions")]
    pub in_probes: Option<PathBuf>,
    #[arg(long)]
    pub in_labels: Option<PathBuf>,
    /// Probes from classes the model never saw (original space).
    #[arg(long, required_unless_present = "predictions")]
    pub out_probes: Option<PathBuf>,
    #[arg(long)]
    pub out_labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Idx)]
    pub probe_format: Format,
    /// Use at most N probes per class.
    #[arg(long)]
    pub probes_per_class: Option<usize>,

    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[command(flatten)]
    pub examiner: ExaminerArgs,
}

#[derive(Debug, Args)]
pub struct KeyspaceArgs {
    /// Bits per encoded value (h).
    #[arg(long, default_value_t = 32)]
    pub bits: u64,
    /// Matrix dimension (m).
    #[arg(long, default_value_t = 4)]
    pub dim: u64,
    /// Shares per matrix dimension (r).
    #[arg(long, default_value_t = 1)]
    pub shares: u64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = NormalizationArg::Minmax)]
    pub normalization: NormalizationArg,
    /// File name prefix.
    #[arg(long, default_value = "image")]
    pub prefix: String,
}
