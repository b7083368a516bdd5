use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use venn_nn::taxonomy::TaxonomyKind;

#[derive(Debug, Parser)]
#[command(
    name = "venn-nn",
    version,
    about = "Venn prediction with a neural-network underlying algorithm"
)]
pub struct Cli {
    /// Worker threads (default: all available cores). Results do not depend on it.
    #[arg(long, global = true, env = "NNVP_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print example, attribute and class counts of a dataset.
    Inspect(InspectArgs),
    /// On-line protocol: predict each example in turn, then reveal its label.
    Online(OnlineArgs),
    /// Batch protocol: repeated random train/test divisions.
    Batch(BatchArgs),
    /// Re-run an experiment from a saved run_config.json.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// CSV file, one example per row, class label in the last column.
    #[arg(long, env = "NNVP_DATASET")]
    pub dataset: PathBuf,

    /// The first line is a header.
    #[arg(long, env = "NNVP_HEADER")]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub data: DatasetArgs,

    /// Taxonomies to evaluate (repeat or comma-separate); default v1..v5.
    #[arg(long = "taxonomy", value_delimiter = ',', env = "NNVP_TAXONOMY")]
    pub taxonomies: Vec<TaxonomyKind>,

    /// Threshold for the selected taxonomy (needs exactly one --taxonomy).
    #[arg(long, env = "NNVP_THETA")]
    pub theta: Option<f64>,

    /// Hidden units of the network.
    #[arg(long, env = "NNVP_HIDDEN")]
    pub hidden: usize,

    /// Root seed for every random choice of the run.
    #[arg(long, default_value_t = 0, env = "NNVP_SEED")]
    pub seed: u64,

    /// Trainings from different initial weights per network.
    #[arg(long, default_value_t = 3, env = "NNVP_RESTARTS")]
    pub restarts: usize,

    #[arg(long, default_value_t = 200, env = "NNVP_MAX_EPOCHS")]
    pub max_epochs: usize,

    /// Successful iterations without validation improvement before stopping.
    #[arg(long, default_value_t = 20, env = "NNVP_PATIENCE")]
    pub patience: usize,

    /// Directory for run_config.json and result files.
    #[arg(long, env = "NNVP_OUT_DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct OnlineArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,

    /// Examples revealed before the first prediction.
    #[arg(long, default_value_t = 50, env = "NNVP_INITIAL_SIZE")]
    pub initial_size: usize,

    /// Stop after this many predictions.
    #[arg(long, env = "NNVP_SUBSAMPLE")]
    pub subsample: Option<usize>,

    /// Also run the plain network.
    #[arg(long, env = "NNVP_BASELINE")]
    pub baseline: bool,

    /// Run only the plain network.
    #[arg(long, conflicts_with_all = ["taxonomies", "theta", "baseline"])]
    pub baseline_only: bool,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,

    #[arg(long, default_value_t = 10, env = "NNVP_REPEATS")]
    pub repeats: usize,

    #[arg(long, default_value_t = 0.1, env = "NNVP_TEST_FRACTION")]
    pub test_fraction: f64,

    /// Equal-width bins for the reliability term.
    #[arg(long, default_value_t = 100, env = "NNVP_RELIABILITY_BINS")]
    pub reliability_bins: usize,

    /// Restarts for the networks inside the Venn predictor (default: --restarts).
    #[arg(long, env = "NNVP_VENN_RESTARTS")]
    pub venn_restarts: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// A run_config.json written by an earlier run.
    #[arg(long)]
    pub config: PathBuf,

    /// Where to write the results.
    #[arg(long, env = "NNVP_OUT_DIR")]
    pub out_dir: PathBuf,
}
