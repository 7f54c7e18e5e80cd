//! `ballspec`: spectra, eigenfunctions and bounds for Hamming-ball subgraphs
//! of the hypercube.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource budget exceeded.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ballspec::Error;
use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ballspec",
    version,
    about = "Spectra of Hamming-ball subgraphs of the hypercube"
)]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Vertex budget of the dense oracle.
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    pub dense_limit: u64,

    /// Eigenvalues closer than this times (n + 1) are merged.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    pub merge_eps_scale: f64,

    /// Worker threads for batch verification.
    #[arg(long, global = true, env = "BALLSPEC_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full spectrum of the subgraph induced by a ball or shell.
    Spectrum(Radii),
    /// Compare the closed-form spectrum with a dense eigendecomposition.
    Verify(VerifyArgs),
    /// Bounds on the maximal eigenvalue and fractional edge boundary.
    Bounds(BoundsArgs),
    /// Krawtchouk polynomials: roots, coefficients, values.
    Krawtchouk(KrawtchoukArgs),
    /// Explicit eigenfunction centered at a t-subset y.
    Eigenfunction(EigenfunctionArgs),
    /// Spectrum of the bipartite graph between spheres r - 1 and r.
    Incidence(IncidenceArgs),
    /// Edge list of the induced subgraph.
    Edges(Radii),
}

/// Either a ball radius or a pair of shell radii.
#[derive(Debug, Clone, Args)]
pub struct Radii {
    #[arg(long)]
    pub n: u32,
    /// Ball radius, same as `--r1 0 --r2 R`.
    #[arg(long, conflicts_with_all = ["r1", "r2"], required_unless_present = "r2")]
    pub r: Option<u32>,
    #[arg(long, requires = "r2")]
    pub r1: Option<u32>,
    #[arg(long)]
    pub r2: Option<u32>,
}

impl Radii {
    pub fn resolve(&self) -> (u32, u32, u32) {
        match self.r {
            Some(r) => (self.n, 0, r),
            None => (
                self.n,
                self.r1.unwrap_or(0),
                self.r2.expect("clap requires r2"),
            ),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, required_unless_present = "all")]
    pub n: Option<u32>,
    #[arg(long, conflicts_with_all = ["r1", "r2", "all"])]
    pub r: Option<u32>,
    #[arg(long, requires = "r2", conflicts_with = "all")]
    pub r1: Option<u32>,
    #[arg(long, conflicts_with = "all")]
    pub r2: Option<u32>,
    /// Maximal allowed eigenvalue deviation.
    #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
    pub tol: f64,
    /// Verify every shell with n <= max-n.
    #[arg(long, requires = "max_n", conflicts_with = "n")]
    pub all: bool,
    #[arg(long, requires = "all")]
    pub max_n: Option<u32>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("size").required(true).args(["log2s", "s", "codim"]))]
pub struct BoundsArgs {
    /// Dimensions; several values give one report per dimension.
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// log₂ of the set size.
    #[arg(long)]
    pub log2s: Option<f64>,
    /// Set size as a decimal integer of any length.
    #[arg(long)]
    pub s: Option<String>,
    /// log₂(2ⁿ/s), applied to each dimension.
    #[arg(long)]
    pub codim: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("action").required(true).args(["roots", "coeffs", "eval", "first_root"]))]
pub struct KrawtchoukArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub k: i64,
    /// All roots in increasing order.
    #[arg(long)]
    pub roots: bool,
    /// Exact coefficients in ascending powers of x.
    #[arg(long)]
    pub coeffs: bool,
    /// Exact value at an integer point.
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Option<i64>,
    /// Smallest root.
    #[arg(long)]
    pub first_root: bool,
    /// Root tolerance.
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EigenfunctionArgs {
    #[command(flatten)]
    pub radii: Radii,
    #[arg(long)]
    pub t: u32,
    /// Center as a bitstring of length n, highest coordinate first;
    /// defaults to the lowest t coordinates.
    #[arg(long)]
    pub y: Option<String>,
    /// Index of the eigenvalue within the t-block, in increasing order.
    #[arg(long, default_value_t = 0)]
    pub which: usize,
}

#[derive(Debug, Args)]
pub struct IncidenceArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
    /// Also compare against the dense oracle.
    #[arg(long)]
    pub check: bool,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

/// Outcome of a subcommand before it is mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli, &mut out);
    let flushed = out.flush();
    let code = match result {
        Ok(()) => 0,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("{msg}");
            3
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            1
        }
    };
    if code == 0 {
        if let Err(e) = flushed {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                eprintln!("i/o error: {e}");
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(code)
}
