use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "anisowalk",
    version = env!("ANISOWALK_VERSION"),
    about = "Anisotropic random walks on random Schreier graphs and lifts",
    propagate_version = true
)]
pub struct Cli {
    /// Root seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory for two-column data files ready for gnuplot.
    #[arg(long, global = true, value_name = "DIR")]
    pub emit_plotdata: Option<PathBuf>,
    /// TOML configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Schreier,
    Lift,
    File,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral radii, entropy, p -> p', stopping set and backbone kernel on the tree.
    TreeCalc(TreeCalcArgs),
    /// Generate a random Schreier graph or lift and write it in the graph file format.
    Gen(GenArgs),
    /// Distance-to-equilibrium curve and mixing times from one start.
    Mix(MixArgs),
    /// Singular radii and, for small graphs, the dense spectrum with outliers.
    Spectra(SpectraArgs),
    /// Geronimus polynomials and non-backtracking laws.
    Nb(NbArgs),
    /// Run an invariant suite; exits with status 3 on any failure.
    Verify(VerifyArgs),
    /// Mixing times over sizes and seeds against the entropic prediction.
    Cutoff(CutoffArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TreeCalc(_) => "tree-calc",
            Command::Gen(_) => "gen",
            Command::Mix(_) => "mix",
            Command::Spectra(_) => "spectra",
            Command::Nb(_) => "nb",
            Command::Verify(_) => "verify",
            Command::Cutoff(_) => "cutoff",
        }
    }
}

/// Jump law on the tree.
#[derive(Clone, Debug, Default, Args)]
pub struct LawArgs {
    /// Number of letters.
    #[arg(long)]
    pub d: Option<usize>,
    /// Involution: `id`, `pairs`, or a 1-based table such as `2,1,4,3`.
    #[arg(long)]
    pub inv: Option<String>,
    /// `uniform`, comma separated weights (normalized), or `p d=.. inv=.. mass=..`.
    #[arg(long)]
    pub p: Option<String>,
}

/// Where the graph comes from and how it is walked.
#[derive(Clone, Debug, Default, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Graph or lift file (implies `--family file`).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Number of vertices (fiber size for lifts).
    #[arg(long)]
    pub n: Option<usize>,
    /// Base graph of a lift: `complete:<r>` or the path of a lift file.
    #[arg(long)]
    pub base: Option<String>,
    /// Colored weights of a lift, one per letter, or `simple`.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Debug, Args)]
pub struct TreeCalcArgs {
    #[command(flatten)]
    pub law: LawArgs,
    /// Green-function scale of the stopping set.
    #[arg(long)]
    pub k: Option<u64>,
    /// Walks of the Monte Carlo entropy estimator.
    #[arg(long)]
    pub walks: Option<usize>,
    /// Time horizon of the Monte Carlo entropy estimator.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Also compute the exact entropy increment up to this time.
    #[arg(long)]
    pub dp_horizon: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub start: Option<usize>,
    #[arg(long)]
    pub t_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Times at which the singular radius is computed.
    #[arg(long, value_delimiter = ',')]
    pub ts: Option<Vec<usize>>,
    /// Dense spectrum and outliers (small graphs only).
    #[arg(long)]
    pub dense: bool,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// Radius of the covering-tree operator; computed when omitted.
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NbArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Largest polynomial degree.
    #[arg(long)]
    pub k: Option<usize>,
    /// Start vertex for the non-backtracking law on a graph.
    #[arg(long)]
    pub x: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Qnormal,
    Pprime,
    Integrability,
    Kernels,
    Geronimus,
    Stoop,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Number of seeded instances per check.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CutoffArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Random starts per graph in addition to vertex 0.
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Entropy of the covering walk, when known.
    #[arg(long)]
    pub entropy: Option<f64>,
    #[arg(long)]
    pub entropy_walks: Option<usize>,
    #[arg(long)]
    pub entropy_horizon: Option<usize>,
    /// Power-iteration steps for the singular radius of each graph (0 skips it).
    #[arg(long)]
    pub sigma_iters: Option<usize>,
}
