//! `ninner`: evaluate n-inner products on vector files, run seeded identity
//! suites, check Dodgson identities on matrix files, and fit regressions on
//! CSV datasets.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ninner_core::suite::SuiteKind;
use ninner_core::{Error, Mode, ProductKind};

/// Exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const UNEXPECTED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const DIMENSION: u8 = 3;
    pub const COLLINEAR: u8 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "ninner", version, about = "n-inner products, the n-iterated 2-inner product, and their identities")]
pub struct Cli {
    /// Arithmetic: exact rationals or f64.
    #[arg(long, global = true, env = "NINNER_DEFAULT_MODE", default_value = "exact", value_parser = parse_mode)]
    pub mode: Mode,

    /// Relative tolerance for float-mode comparisons.
    #[arg(long, global = true, default_value_t = ninner_core::DEFAULT_TOL)]
    pub tol: f64,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate (x, y | x_n, …, x_2) on vectors from a file.
    ///
    /// Conditioners are listed in written order: the first index is x_n,
    /// which the iterated product peels first, and the last is x_2. The
    /// iterated product and E_n depend on this order.
    Product(ProductArgs),
    /// Run a seeded randomized suite.
    Verify(VerifyArgs),
    /// Fit z ≈ a·x + b·y + c on a CSV dataset by three methods.
    Regress(RegressArgs),
    /// Check the Dodgson identities and condensation on a matrix file.
    Dodgson(DodgsonArgs),
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    #[arg(value_parser = parse_kind)]
    pub kind: ProductKind,
    /// Vector file: one comma-separated vector per line (0-based indices below).
    #[arg(long)]
    pub file: std::path::PathBuf,
    #[arg(long)]
    pub x: usize,
    #[arg(long)]
    pub y: usize,
    /// Conditioner indices x_n, …, x_2, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cond: Vec<usize>,
    /// Exchange the argument (x = y required) with the last conditioner x_2.
    #[arg(long)]
    pub swap_roles: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: SuiteKind,
    /// Order of the products drawn (ignored by dodgson, gram and regression).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Vector dimension; also the largest matrix order for dodgson.
    /// Defaults to max(n + 1, 4).
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct RegressArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub file: std::path::PathBuf,
    /// Response column.
    #[arg(long)]
    pub response: String,
    /// Two predictor columns, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub predictors: Vec<String>,
}

#[derive(Args, Debug)]
pub struct DodgsonArgs {
    /// Matrix file: one comma-separated row per line.
    #[arg(long)]
    pub file: std::path::PathBuf,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<ProductKind, String> {
    s.parse::<ProductKind>().map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<SuiteKind, String> {
    s.parse()
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DimensionMismatch { .. } | Error::LineLength { .. } => exit::DIMENSION,
            Error::Collinear { .. } | Error::Singular { .. } => exit::COLLINEAR,
            Error::Inconsistent(_) | Error::RedrawCap(_) | Error::NegativeSquaredNorm { .. } => exit::UNEXPECTED,
            _ => exit::USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Failure::new(exit::OK, "")
        } else {
            Failure::new(exit::UNEXPECTED, format!("cannot write output: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
