use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lidkit",
    version,
    about = "Local intrinsic dimension estimation and LID-based truthfulness detection"
)]
pub struct Cli {
    /// Worker threads (defaults to one per core). Output does not depend on it.
    #[arg(long, global = true, env = "LIDKIT_THREADS")]
    pub threads: Option<usize>,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic manifold into an activation file.
    GenSynthetic(GenArgs),
    /// Estimate intrinsic dimension of an activation file.
    Estimate(EstimateArgs),
    /// Score samples by -LID and report AUROC against their labels.
    Detect(DetectArgs),
    /// Label samples by Rouge-L between generation and reference.
    Score(ScoreArgs),
    /// Estimate dimension of spheres and Gaussian blobs with known dimension.
    Sanity(SanityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManifoldArg {
    Sphere,
    Norm,
    /// Low-dimensional (label 1) and high-dimensional (label 0) spheres.
    Mixture,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub manifold: ManifoldArg,

    /// Intrinsic dimension (the low dimension for a mixture).
    #[arg(long)]
    pub m: usize,

    /// Dimension of the high-dimensional mixture component.
    #[arg(long)]
    pub m_high: Option<usize>,

    /// Ambient dimension D.
    #[arg(long, default_value_t = 4096)]
    pub ambient: usize,

    /// Number of points (per class for a mixture).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    /// Standard deviation of Gaussian noise added to every coordinate.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Keep the manifold in the first coordinates instead of a random subspace.
    #[arg(long)]
    pub no_rotate: bool,

    /// Output activation file.
    #[arg(short, long)]
    pub output: PathBuf,

    /// Also write mixture labels as samples JSONL.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mle,
    Geomle,
    Twonn,
    #[value(name = "knn-graph")]
    KnnGraph,
}

#[derive(Debug, Args)]
pub struct GeomleArgs {
    /// GeoMLE bootstrap resamples.
    #[arg(long, default_value_t = 20)]
    pub bootstrap: usize,

    /// Smallest neighbor count of the GeoMLE regression [default: max(10, ceil(T/2))].
    #[arg(long)]
    pub t_min: Option<usize>,

    /// Degree of the GeoMLE distance correction polynomial.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Activation file.
    #[arg(short, long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = MethodArg::Mle)]
    pub method: MethodArg,

    /// Neighbor count T (mle, geomle).
    #[arg(long, default_value_t = 500)]
    pub neighbors: usize,

    /// Draw neighbors from this activation file instead of the input.
    #[arg(long)]
    pub reference: Option<PathBuf>,

    /// Seed for GeoMLE bootstrap and kNN-graph subsets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub geomle: GeomleArgs,

    /// Fraction of the largest TwoNN ratios treated as censored.
    #[arg(long, default_value_t = 0.1)]
    pub trim: f64,

    /// Neighbors per point in the kNN graph.
    #[arg(long, default_value_t = 5)]
    pub k: usize,

    /// Random subsets per size in the kNN-graph fit.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,

    /// JSONL output [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoringMethodArg {
    Mle,
    Geomle,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Activation file of the scored samples.
    #[arg(
        short,
        long,
        conflicts_with = "layer_dir",
        required_unless_present = "layer_dir"
    )]
    pub activations: Option<PathBuf>,

    /// Directory with manifest.json and one layer_<k>.bin per layer.
    #[arg(long)]
    pub layer_dir: Option<PathBuf>,

    /// Pick the layer after the one with the largest summed LID.
    #[arg(long, requires = "layer_dir", conflicts_with = "layer")]
    pub auto_layer: bool,

    /// Layer to score from --layer-dir.
    #[arg(long, requires = "layer_dir")]
    pub layer: Option<u32>,

    /// Layers added to the argmax by --auto-layer.
    #[arg(long, default_value_t = 1)]
    pub shift: usize,

    /// Labelled samples JSONL.
    #[arg(short, long)]
    pub samples: PathBuf,

    #[arg(long, value_enum, default_value_t = ScoringMethodArg::Mle)]
    pub method: ScoringMethodArg,

    #[arg(long, default_value_t = 500)]
    pub neighbors: usize,

    /// Neighbor pool from another dataset; queries are then never excluded.
    #[arg(long)]
    pub reference: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub geomle: GeomleArgs,

    /// Report JSON [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Also write per-sample id,lid,score,label rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Samples JSONL with generation and reference.
    #[arg(short, long)]
    pub input: PathBuf,

    /// Minimum Rouge-L for label 1.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,

    /// Labelled samples [default: rewrite the input].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SanityArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// n = 500 and D = 512, with every band widened by 1.5 on both sides.
    #[arg(long)]
    pub fast: bool,

    /// Neighbor count for MLE and GeoMLE.
    #[arg(long, default_value_t = 20)]
    pub neighbors: usize,

    /// Per-coordinate noise of the noisy rows.
    #[arg(long, default_value_t = 0.05)]
    pub noise: f64,
}
