use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "paracalc",
    version,
    about = "Paraproducts, parametrix verification and regularity bookkeeping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rasterize the parameter domains over the (1/p, s) plane.
    Domains(DomainsArgs),
    /// Minimal number of parametrix factors, or a seeded survey when no target is given.
    MinimalN(MinimalNArgs),
    /// Parametrix residual table for a manufactured instance.
    Verify(VerifyArgs),
    /// Paraproduct decomposition and paralinearization identity on random data.
    ParaproductCheck(ParaproductCheckArgs),
    /// Block norms and smoothness estimate of a synthesized rough signal.
    Smoothness(SmoothnessArgs),
    /// Per-iterate smoothness of (R_D L_u)^k u for rough u.
    SmoothingProfile(SmoothingProfileArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Artifact path; written atomically.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Artifact format; defaults to the extension of --out, else csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct DomainsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Pixels per axis.
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct MinimalNArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Target smoothness.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Target integrability.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = paracalc_core::regcalc::DEFAULT_EPSILON, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long = "max-n", default_value_t = paracalc_core::regcalc::DEFAULT_MAX_N)]
    pub max_n: u32,
    /// Survey sample count.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated modes: `k:amp` for sine, `ck:amp` for a cosine mode.
    #[arg(long, default_value = "1:1")]
    pub modes: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi1: f64,
    /// Finest grid level; the table runs over J-3..=J.
    #[arg(long = "J", default_value_t = 12)]
    pub level: u32,
    #[arg(long = "N", default_value_t = 3)]
    pub terms: usize,
    #[arg(long = "M", default_value_t = paracalc_core::paraproduct::DEFAULT_ORDER)]
    pub order: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ParaproductCheckArgs {
    #[arg(long = "J", default_value_t = 10)]
    pub level: u32,
    #[arg(long = "M", default_value_t = paracalc_core::paraproduct::DEFAULT_ORDER)]
    pub order: usize,
    /// Number of random pairs.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SmoothnessArgs {
    /// Roughness exponent of the synthesized signal.
    #[arg(long, allow_negative_numbers = true)]
    pub s0: f64,
    /// Block norm exponent.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long = "J", default_value_t = 12)]
    pub level: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SmoothingProfileArgs {
    /// Roughness exponent of the a priori function.
    #[arg(long, allow_negative_numbers = true)]
    pub s0: f64,
    /// Block norm exponent, also used for the operator order.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long = "J", default_value_t = 12)]
    pub level: u32,
    #[arg(long = "N", default_value_t = 2)]
    pub terms: usize,
    #[arg(long = "M", default_value_t = paracalc_core::paraproduct::DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = paracalc_core::regcalc::DEFAULT_EPSILON, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}
