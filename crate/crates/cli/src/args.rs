use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "herdq", version = crate::VERSION, about = "SIR epidemics with perfect quarantines on contact networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a random graph and write it as an edge list.
    Generate(GenerateArgs),
    /// One-row summary statistics of a graph.
    Stats(StatsArgs),
    /// Generating-function analytics over a threshold grid.
    Analyze(AnalyzeArgs),
    /// Run SIR trials under one quarantine policy.
    Simulate(SimulateArgs),
    /// Single-quarantine threshold sweep (V-curve).
    Sweep(SweepArgs),
    /// Two-quarantine threshold grid.
    Grid2q(Grid2qArgs),
    /// Multi-quarantine strategies: equal wave peaks or infected-count triggers.
    Multiq(MultiqArgs),
    /// Threshold sweeps across beta/gamma ratios.
    Ablate(AblateArgs),
    /// Minimal immunization fractions compared with quarantining.
    Immunize(ImmunizeArgs),
    /// Structural change of the susceptible subgraph and groupwise survival.
    Report(ReportArgs),
    /// The same sweep on a series of graphs with one generator parameter varied.
    Robustness(RobustnessArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Stats(_) => "stats",
            Command::Analyze(_) => "analyze",
            Command::Simulate(_) => "simulate",
            Command::Sweep(_) => "sweep",
            Command::Grid2q(_) => "grid2q",
            Command::Multiq(_) => "multiq",
            Command::Ablate(_) => "ablate",
            Command::Immunize(_) => "immunize",
            Command::Report(_) => "report",
            Command::Robustness(_) => "robustness",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Generate(a) => &a.common,
            Command::Stats(a) => &a.common,
            Command::Analyze(a) => &a.common,
            Command::Simulate(a) => &a.common,
            Command::Sweep(a) => &a.common,
            Command::Grid2q(a) => &a.common,
            Command::Multiq(a) => &a.common,
            Command::Ablate(a) => &a.common,
            Command::Immunize(a) => &a.common,
            Command::Report(a) => &a.common,
            Command::Robustness(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Output directory (output file for generate) [default: $HERDQ_OUT_DIR, else herdq-out]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Master seed; every random stream is derived from it
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it
    #[arg(long, default_value_t = 0, value_name = "COUNT")]
    pub workers: usize,
    /// Flat "key = value" file; flags given on the command line take precedence
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Barabási-Albert preferential attachment (--n, --m)
    Ba,
    /// Powerlaw-cluster growth (--n, --m, --p)
    Plc,
    /// Watts-Strogatz ring (--n, --k, --p)
    Ws,
    /// Random-walk growth (--n, --q-e, --q-v)
    Rw,
    /// Nearest-neighbour growth (--n, --u, --k)
    Nn,
    /// Configuration model over --dist (--n)
    Config,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistFamily {
    /// p_k proportional to k^-alpha, k >= 1 (--alpha)
    SimplePowerlaw,
    /// Limiting Barabási-Albert distribution (--m)
    Ba,
    /// Poisson (--lambda)
    Poisson,
    /// Every node has degree d (--d)
    Regular,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistArgs {
    /// Power-law exponent for simple-powerlaw [dimensionless, > 2]
    #[arg(long, default_value_t = 3.0)]
    pub alpha: f64,
    /// Poisson mean degree [edges per node]
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    /// Degree of the regular distribution [edges per node]
    #[arg(long, default_value_t = 4)]
    pub d: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// Edge-list file to load instead of generating a graph
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Generator family, used when --graph is absent
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Number of nodes [count]
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Edges attached per new node (ba, plc); m for --dist ba [count]
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Triad probability (plc) or rewiring probability (ws) [0-1] [default: 0.5 for plc, 0.05 for ws]
    #[arg(long)]
    pub p: Option<f64>,
    /// Ring degree (ws) or random links per new node (nn) [count] [default: 10 for ws, 6 for nn]
    #[arg(long)]
    pub k: Option<usize>,
    /// Walk continuation probability (rw) [0-1]
    #[arg(long = "q-e", default_value_t = 0.91)]
    pub q_e: f64,
    /// Per-visited-node link probability (rw) [0-1]
    #[arg(long = "q-v", default_value_t = 0.94)]
    pub q_v: f64,
    /// Probability of closing a pending 2-hop pair (nn) [0-1]
    #[arg(long, default_value_t = 0.88)]
    pub u: f64,
    /// Degree distribution for --family config
    #[arg(long, value_enum, default_value_t = DistFamily::SimplePowerlaw)]
    pub dist: DistFamily,
    #[command(flatten)]
    pub dist_params: DistArgs,
}

impl GraphArgs {
    pub fn p_or_default(&self) -> f64 {
        self.p
            .unwrap_or(if self.family == Some(Family::Ws) { 0.05 } else { 0.5 })
    }

    pub fn k_or_default(&self) -> usize {
        self.k.unwrap_or(if self.family == Some(Family::Nn) { 6 } else { 10 })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EpiArgs {
    /// Infection rate per infected-susceptible edge [1/time]
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Recovery rate [1/time]
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Nodes infected at the start and after every quarantine [count]
    #[arg(long, default_value_t = 10)]
    pub rho: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Random node pairs sampled for the mean shortest path [count]
    #[arg(long, default_value_t = 20_000)]
    pub path_pairs: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Degree distribution
    #[arg(long, value_enum, default_value_t = DistFamily::SimplePowerlaw)]
    pub family: DistFamily,
    #[command(flatten)]
    pub dist_params: DistArgs,
    /// Attachment count for --family ba [count]
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Infection rate, used for the transmissibility beta/(beta+gamma) [1/time]
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Recovery rate [1/time]
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Spacing of the u grid on [0, 1] [fraction]
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    /// Quarantine policy: none, fraction:<list>, since:<list> or count:<n>[:<max>]
    #[arg(long, default_value = "none")]
    pub policy: String,
    /// Independent runs [count]
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Also write the (t, S, I, R) series of every run
    #[arg(long)]
    pub series: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Spacing of the threshold grid on [0, 1] [fraction of n]
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Trials per grid point [count]
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Grid2qArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    /// Spacing of both threshold axes [fraction of n]
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Trials per cell [count]
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiqMode {
    /// Thresholds chosen so that wave peaks are roughly equal
    EqualPeaks,
    /// Quarantine whenever the infected count reaches a trigger
    Count,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MultiqArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    /// Strategy family
    #[arg(long, value_enum, default_value_t = MultiqMode::EqualPeaks)]
    pub mode: MultiqMode,
    /// Largest number of quarantines for equal-peaks; 1..=this are all run [count]
    #[arg(long, default_value_t = 3)]
    pub quarantines: usize,
    /// Infected-count triggers for count mode, comma separated [nodes]
    #[arg(long, value_delimiter = ',', default_value = "20,50,100,150,200")]
    pub triggers: Vec<usize>,
    /// Trials per evaluation [count]
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Spacing of the single-quarantine reference sweep in count mode [fraction of n]
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AblateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// beta/gamma ratios, comma separated; beta = ratio * gamma [dimensionless]
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.03125,0.0625,0.125,0.25,0.5,1,2,4,8,16,32"
    )]
    pub ratios: Vec<f64>,
    /// Recovery rate [1/time]
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Nodes infected at the start and after every quarantine [count]
    #[arg(long, default_value_t = 10)]
    pub rho: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImmunizeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Trials per candidate immunization fraction [count]
    #[arg(long, default_value_t = 100)]
    pub imm_trials: usize,
    /// Required share of trials without an outbreak [0-1]
    #[arg(long, default_value_t = 0.95)]
    pub quantile: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    /// Quarantine threshold [fraction of n] [default: argmin of a sweep]
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Runs averaged for the post-quarantine subgraph [count]
    #[arg(long, default_value_t = 20)]
    pub struct_trials: usize,
    /// Node pairs sampled per shortest-path estimate [count]
    #[arg(long, default_value_t = 5_000)]
    pub path_pairs: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VaryParam {
    N,
    M,
    P,
    K,
    U,
    QE,
    QV,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RobustnessArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub epi: EpiArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Generator parameter to vary
    #[arg(long, value_enum)]
    pub vary: Option<VaryParam>,
    /// Values taken by the varied parameter, comma separated
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}
