//! `twlab`: treewidth, extended formulations, minor lifting and polytope
//! experiments from the command line.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "twlab", version, about = "Treewidth-based formulations and extension-complexity experiments")]
pub struct Cli {
    /// Output format; each subcommand accepts a subset.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads. Defaults to all cores for experiments and 1 elsewhere.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Lp,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Treewidth of a DIMACS graph, with a decomposition.
    Tw(TwArgs),
    /// Heuristic or exact decomposition, or verification of a given one.
    Decompose(DecomposeArgs),
    /// Facets and affine hull of a point set.
    Hull(PointsArgs),
    /// Slack matrix of a point set against its facets.
    Slack(PointsArgs),
    /// Facets, slack matrix and the extension-complexity bracket.
    XcBracket(BracketArgs),
    /// Point-set and graph constructions.
    #[command(subcommand)]
    Compose(ComposeCmd),
    /// Tree-decomposition-based extended formulations.
    #[command(subcommand)]
    Ef(EfCmd),
    /// Solve or emit a linear program.
    #[command(subcommand)]
    Lp(LpCmd),
    /// Encode satisfiability inputs as polynomial optimization instances.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Lift an instance onto a host graph.
    Lift(LiftArgs),
    /// Round an ε-feasible point of a lifted instance.
    Round(RoundArgs),
    /// Solve MAX-2SAT through a host graph.
    Pipeline(PipelineArgs),
    /// Monte Carlo estimate of P(α(G(n,p)) >= r) against the tail bound.
    GnpExperiment(GnpArgs),
}

#[derive(Args, Debug)]
pub struct TwArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value = "min-fill")]
    pub heuristic: String,
    #[arg(long, default_value_t = twlab_core::graph::DEFAULT_EXACT_CAP)]
    pub cap_tw: usize,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub tw: TwArgs,
    /// Check this decomposition JSON instead of computing one.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, default_value_t = twlab_core::polytope::DEFAULT_HULL_CAP)]
    pub cap_hull: usize,
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    #[command(flatten)]
    pub points: PointsArgs,
    #[arg(long, default_value_t = twlab_core::polytope::DEFAULT_COVER_CAP)]
    pub cap_cover: usize,
    /// Size of a known extended formulation, used as an upper bound.
    #[arg(long)]
    pub ef_size: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ComposeCmd {
    /// S⁺ of a point set.
    Plus {
        #[arg(long)]
        points: PathBuf,
    },
    /// k-fold product of S⁺.
    Power {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Stable-set indicator vectors of a graph.
    Stab {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = twlab_core::polytope::DEFAULT_STAB_CAP)]
        cap_enum: usize,
    },
    /// The graph plus a universal vertex, as DIMACS (or JSON with --format json).
    Gplus {
        #[arg(long)]
        graph: PathBuf,
    },
    /// (S^{×k})⁺ with k = ⌊(n-1)/(ω+1)⌋ for a seed on ω coordinates.
    HardFamily {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: usize,
    },
}

#[derive(Args, Debug)]
pub struct EfInput {
    #[arg(long)]
    pub instance: PathBuf,
    /// Decomposition JSON over the instance's variables; defaults to the
    /// better of min-fill and min-degree.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    #[arg(long, default_value_t = twlab_core::lp::DEFAULT_EF_COLUMN_CAP)]
    pub column_cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum EfCmd {
    BuildBinary(EfInput),
    BuildEps {
        #[command(flatten)]
        input: EfInput,
        #[arg(long)]
        eps: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LpCmd {
    /// Exact simplex, or the tree solver when a bag table is given.
    Solve {
        #[arg(long)]
        lp: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// LP text with Maximize/Subject To/Bounds/End sections.
    Emit {
        #[arg(long)]
        lp: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    Max2sat {
        #[arg(long)]
        wcnf: PathBuf,
        /// One indicator per clause instead of two.
        #[arg(long)]
        v1: bool,
    },
    #[command(name = "2sat")]
    TwoSat {
        #[arg(long)]
        cnf: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// `grid:<g>`, `grid:<r>x<c>` or a DIMACS file.
    #[arg(long)]
    pub host: String,
    /// JSON list of minor operations turning the host into the instance graph.
    #[arg(long, conflicts_with = "model")]
    pub ops: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = twlab_core::graph::DEFAULT_MINOR_CAP)]
    pub cap_minor: usize,
}

#[derive(Args, Debug)]
pub struct RoundArgs {
    #[arg(long)]
    pub lifted: PathBuf,
    /// Assignment JSON: variable to rational string.
    #[arg(long)]
    pub point: PathBuf,
    #[arg(long)]
    pub eps: String,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long)]
    pub wcnf: PathBuf,
    #[arg(long)]
    pub host: String,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = twlab_core::graph::DEFAULT_MINOR_CAP)]
    pub cap_minor: usize,
    /// Include per-stage wall-clock times (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct GnpArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => io::report(&e),
    }
}
