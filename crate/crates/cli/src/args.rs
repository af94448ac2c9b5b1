use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "isograph", version, about = "Isometric graph embeddings into model spaces")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shape flags and structural form of a connected graph.
    Classify(GraphInput),
    /// Embeddability decision with a witness embedding.
    Embed(EmbedArgs),
    /// Residual report for an embedding against a graph's metric.
    Verify(VerifyArgs),
    /// Exhaustive comparison of the structural decision with the oracle.
    Audit(AuditArgs),
    /// Emit graph6 for a named family or for enumerated graphs.
    Gen(GenArgs),
    /// Shortest-path distance matrix as JSON.
    Distance(GraphInput),
}

/// Exactly one source: inline text, a file, or standard input.
#[derive(Debug, Args)]
pub struct GraphInput {
    /// Inline graph: graph6 or edge-list JSON.
    #[arg(long, conflicts_with = "input")]
    pub graph: Option<String>,
    /// File holding one graph (graph6 or edge-list JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Sphere,
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PaperStrict,
    OracleExtended,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub source: GraphInput,
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    #[arg(long)]
    pub dim: usize,
    /// Sphere radius; accepts "2/pi" and "1/arccos(-1/3)".
    #[arg(long)]
    pub radius: Option<String>,
    /// Comma-separated radius grid swept by oracle-extended without --radius.
    #[arg(long)]
    pub radii: Option<String>,
    #[arg(long, value_enum, default_value = "paper-strict")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: GraphInput,
    /// Embedding or decision JSON; "-" reads standard input.
    #[arg(long)]
    pub embedding: PathBuf,
    /// Residual tolerance; defaults to 1e-8 * (1 + largest distance).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    #[arg(long)]
    pub dim: usize,
    /// Comma-separated sphere radii (required for spheres).
    #[arg(long)]
    pub radii: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub max_vertices: usize,
    /// Audit the graphs of this graph6 corpus instead of enumerating.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Allow-list rules; replaces the default list when given.
    #[arg(long = "allow", value_name = "RULE")]
    pub allow: Vec<String>,
    /// Start from an empty allow-list.
    #[arg(long)]
    pub no_default_allow: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Path,
    Cycle,
    Complete,
    Cocktail,
    CompleteMinusMatching,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, required_unless_present = "connected", conflicts_with = "connected")]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Cocktail-party parameter: 2(n + 1) vertices.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub matching: Option<usize>,
    /// Every connected graph on this many vertices, one per line.
    #[arg(long)]
    pub connected: Option<usize>,
    /// With --connected: keep every labeling instead of one per class.
    #[arg(long, requires = "connected")]
    pub labeled: bool,
}
