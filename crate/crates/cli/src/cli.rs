use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "squeeze-lab",
    version,
    about = "Seeded experiments on squeezing functions, pinching radii and metric envelopes",
    args_override_self = true
)]
pub struct Cli {
    /// TOML or JSON file with the same keys as the flags; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Interior samples for pinching and enclosing computations.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Catalog identifier, see `catalog list`.
    #[arg(long)]
    pub domain: String,
    /// Boundary point as comma-separated real coordinates; defaults to the
    /// domain's reference point.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnclosingArgs {
    #[arg(long, default_value_t = 8)]
    pub refine_candidates: usize,
    #[arg(long, default_value_t = 50)]
    pub refine_iterations: usize,
    /// Eigenvalues at or below this make the enclosing radius infinite.
    #[arg(long, default_value_t = 1e-7)]
    pub curvature_floor: f64,
    /// Skip the curvature candidate `1 / lambda_min`.
    #[arg(long)]
    pub no_local_limit: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball pinching radius at a boundary point.
    Pinch {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        enclosing: EnclosingArgs,
    },
    /// Enclosing radius at a boundary point.
    Enclosing {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        enclosing: EnclosingArgs,
    },
    /// Ring scan of the pinching radius near a boundary point.
    Semicontinuity {
        #[command(flatten)]
        domain: DomainArgs,
        /// Strictly decreasing radii.
        #[arg(long, default_value = "0.2,0.1,0.05,0.02")]
        radii: String,
        #[arg(long, default_value_t = 32)]
        ring_samples: usize,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// Kobayashi distance from (r,0,...,0) to the boundary of a geodesic ball.
    Geodesic {
        /// Sweep `a:b:n`, inclusive.
        #[arg(long, conflicts_with = "r")]
        r_grid: Option<String>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        rho: f64,
        /// Also run the brute-force oracle inside the closed-form region.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1_000_000)]
        oracle_grid: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Kobayashi distance between two points of the unit ball.
    Kobayashi {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Boundary-estimate sweep along the inward normal.
    Bounds {
        /// With `--domain`, pinching and enclosing radius come from the domain.
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Enclosing radius, when no domain is given.
        #[arg(long)]
        e: Option<f64>,
        /// Pinching radius, when no domain is given.
        #[arg(long)]
        rho: Option<f64>,
        /// Comma list of depths.
        #[arg(long, conflicts_with = "depth_grid")]
        depths: Option<String>,
        /// Sweep `a:b:n`, inclusive.
        #[arg(long)]
        depth_grid: Option<String>,
        #[arg(long)]
        max_depth: Option<f64>,
    },
    /// Squeezing lower bound on a product domain.
    Product {
        /// Comma list of factor lower bounds.
        #[arg(long)]
        factors: String,
    },
    /// Squeezing values along a sequence of domains.
    Limit {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Comparison constants from a squeezing lower bound.
    Envelope {
        /// CK, KB, KKE, VolumeAny, VolumeKB or VolumeKKE.
        #[arg(long)]
        relation: String,
        /// Comma list of squeezing lower bounds.
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Catalog of domains and embeddings.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Witness radius of an embedding and a grid check of the ball inclusion.
    VerifyEmbedding {
        #[arg(long)]
        embedding: String,
        /// Radii to check, comma list.
        #[arg(long)]
        r: Option<String>,
        /// Grid points per real axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[arg(long, default_value_t = 20_000)]
        boundary_samples: usize,
    },
    /// Support function scan of the sheared Reinhardt domain.
    SupportScan {
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 500)]
        grid: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Describe { id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `{0 < |z| < 1 - (1 - |z0|)/(k+2)}` increasing to the punctured disc.
    PuncturedExhaustion,
    /// `{0 < |z| < 1 + 1/k}` decreasing to the punctured disc.
    PuncturedShrinking,
    /// Balls of radius `1 - (1 - |z0|)/(k+2)` increasing to the unit ball.
    BallExhaustion,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pinch { .. } => "pinch",
            Command::Enclosing { .. } => "enclosing",
            Command::Semicontinuity { .. } => "semicontinuity",
            Command::Geodesic { .. } => "geodesic",
            Command::Kobayashi { .. } => "kobayashi",
            Command::Bounds { .. } => "bounds",
            Command::Product { .. } => "product",
            Command::Limit { .. } => "limit",
            Command::Envelope { .. } => "envelope",
            Command::Catalog { .. } => "catalog",
            Command::VerifyEmbedding { .. } => "verify-embedding",
            Command::SupportScan { .. } => "support-scan",
        }
    }

    pub fn uses_samples(&self) -> bool {
        matches!(
            self,
            Command::Pinch { .. }
                | Command::Enclosing { .. }
                | Command::Semicontinuity { .. }
                | Command::Bounds { domain: Some(_), .. }
                | Command::VerifyEmbedding { .. }
        )
    }
}
