//! Command-line front end. [`run`] turns parsed arguments into a report and
//! an exit code: 0 match or pass, 1 mismatch or failed identity, 2 input
//! error, 3 inadmissible data (resonance, degeneracy, vanishing symbol).

pub mod commands;
pub mod report;
pub mod schema;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use leafwise::algebra::DEFAULT_ORDER;

pub use report::Report;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error at {path}: {message}")]
    Input { path: String, message: String },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("internal defect: {0}")]
    Defect(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Inadmissible(_) => 3,
            CliError::Defect(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "leafwise", version, about = "Exact computations with foliated affine and projective structures")]
pub struct Cli {
    /// Truncation order of power series.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    pub order: i64,
    /// Symmetric polynomial in x1, x2, ... for index theorems.
    #[arg(long, global = true)]
    pub phi: Option<String>,
    /// Square-root branch, as p/q.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub branch: Option<String>,
    /// Worker threads for per-point work.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Print the JSON report instead of its text rendering.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Affine distortion f''/f' of a univariate series.
    Distortion { file: PathBuf },
    /// Schwarzian derivative of a univariate series.
    Schwarzian { file: PathBuf },
    /// Normalized angle of a Fuchsian one-form or quadratic differential.
    Angle { file: PathBuf },
    /// Affine symbol in the class of a projective symbol, for the branch θ.
    Riccati { file: PathBuf },
    /// Formal normal form of a symbol at a linear singularity.
    Normalform { kind: KindArg, file: PathBuf },
    /// Small-divisor table and Brjuno-type partial sums.
    Brjuno {
        /// Eigenvalues, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 16)]
        max: u32,
    },
    /// Identities of the geodesic fields and chart transitions.
    Geodesic {
        #[command(subcommand)]
        action: GeodesicAction,
    },
    /// Index theorem check over the declared singular points.
    Index { theorem: TheoremArg, file: PathBuf },
    /// Chern classes of a foliation on a curve times the projective line.
    ProductSurface {
        #[arg(long)]
        genus: u32,
        #[arg(long, allow_hyphen_values = true)]
        nv: i64,
        #[arg(long, allow_hyphen_values = true)]
        nh: i64,
    },
    /// Characteristic numbers of a surface with a regular foliation.
    Signature {
        #[arg(long, allow_hyphen_values = true)]
        c1sq: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        /// c1²(T_F); defaults to c1² − 2c2.
        #[arg(long, allow_hyphen_values = true)]
        tf: Option<String>,
    },
    /// Rewrites a homogeneous description as explicit chart data.
    Expand { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GeodesicAction {
    Check { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Affine,
    Projective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Affine,
    Projective,
    Baumbott,
}

/// Runs one job. Errors become a report of their own so that output stays
/// machine readable.
pub fn run(cli: &Cli) -> (Report, i32) {
    match commands::dispatch(cli) {
        Ok((report, code)) => (report, code),
        Err(e) => {
            let code = e.exit_code();
            (report::error_report(cli, &e), code)
        }
    }
}

pub fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
