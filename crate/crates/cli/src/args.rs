use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hgamma::{FamilyJson, FamilyKind, FamilySpec, Tolerance};

use crate::suites::{Suite, DEFAULT_SEED};

/// Bernstein bases, blossoms and Bezier curves over h-gamma function families.
#[derive(Debug, Parser)]
#[command(name = "curvectl", version)]
pub struct Cli {
    /// Comparison tolerance as "atol,rtol".
    #[arg(long, env = "CURVECTL_TOL", global = true, value_name = "ATOL,RTOL")]
    pub tol: Option<Tolerance>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn tolerance(&self) -> Tolerance {
        self.tol.unwrap_or_default()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether (family, n, h) gives an independent basis; exit 1 if not.
    Validate(ValidateArgs),
    /// Tabulate or plot the basis functions B_0..B_n.
    Basis(BasisArgs),
    /// Evaluate, sample, split, elevate or build a curve from JSON.
    Curve(CurveArgs),
    /// Run seeded property suites; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Serve the JSON API over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family kind.
    #[arg(long, value_name = "KIND")]
    pub family: Option<FamilyKind>,

    /// Discrete parameter d (discrete kinds; optional weight base for exp_weighted).
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,

    /// Inner family of exp_weighted.
    #[arg(long, value_name = "KIND")]
    pub inner: Option<FamilyKind>,

    /// Discrete parameter of the inner family.
    #[arg(long, allow_hyphen_values = true)]
    pub inner_d: Option<f64>,
}

impl FamilyArgs {
    /// The selected family, `default` when `--family` is absent.
    pub fn spec_or(&self, default: FamilyKind) -> hgamma::Result<FamilySpec> {
        self.json(self.family.unwrap_or(default)).try_into()
    }

    pub fn spec(&self) -> hgamma::Result<Option<FamilySpec>> {
        self.family.map(|k| self.json(k).try_into()).transpose()
    }

    fn json(&self, kind: FamilyKind) -> FamilyJson {
        FamilyJson {
            kind,
            d: self.d,
            inner: self.inner.map(|k| {
                Box::new(FamilyJson {
                    kind: k,
                    d: self.inner_d,
                    inner: None,
                })
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,

    /// Degree.
    #[arg(long)]
    pub n: usize,

    /// Step h.
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,

    /// Interval start; with --b, also checks the tableau guards on [a, b].
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    pub a: Option<f64>,

    /// Interval end.
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub family: FamilyArgs,

    /// Degree.
    #[arg(long)]
    pub n: usize,

    /// Step h.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub h: f64,

    /// Interval start.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,

    /// Interval end.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,

    /// Number of equally spaced rows over [a, b].
    #[arg(long, default_value_t = crate::api::DEFAULT_BASIS_SAMPLES)]
    pub samples: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Add the weighted sum Σ b_k B_k that reproduces 1.
    #[arg(long)]
    pub unity: bool,

    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(
    ["eval", "sample", "subdivide", "midpoint", "elevate", "interpolate"]
)))]
pub struct CurveArgs {
    /// Curve JSON file, or "-" for stdin.
    pub input: PathBuf,

    /// Evaluate at parameter x.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub eval: Option<f64>,

    /// Evaluate at S equally spaced parameters.
    #[arg(long, value_name = "S")]
    pub sample: Option<usize>,

    /// Split at parameter t.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    pub subdivide: Option<f64>,

    /// Recursive midpoint subdivision to this depth.
    #[arg(long, value_name = "DEPTH")]
    pub midpoint: Option<u32>,

    /// Raise the degree (polynomial family, or h = 0 trig).
    #[arg(long)]
    pub elevate: bool,

    /// Treat the controls as data points at a, a - h, ..., a - nh and build
    /// the curve through them (the interval end is recomputed).
    #[arg(long)]
    pub interpolate: bool,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run; all suites when absent.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Restrict to one family (default: one of each kind).
    #[command(flatten)]
    pub family: FamilyArgs,

    /// Restrict to one degree.
    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,

    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
}
