use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(name = "tomoslice", version, about = "Hyperplane sections, moments and algebraic fits of convex bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Tabulate the section function A(ξ, t) on a Chebyshev grid
    Profile,
    /// Sample the t-moments of A over directions and fit a homogeneous polynomial
    Moments,
    /// Find the least power m for which A^m is a polynomial in t
    Algfit,
    /// Decide from support data whether the body is an ellipsoid
    Detect,
    /// Estimate the power law of A near the supporting hyperplane
    Asymptote,
    /// Check that squared slice volumes of a quadric domain are polynomial
    QuadricCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// JSON body description
    #[arg(long, global = true, value_name = "PATH")]
    pub body: Option<PathBuf>,
    /// Direction as comma-separated floats; normalized before use.
    /// quadric-check accepts the flag repeatedly.
    #[arg(long, global = true, value_name = "X1,X2,...", allow_hyphen_values = true)]
    pub xi: Vec<String>,
    /// Number of grid points (profile, algfit, quadric-check) or regression
    /// depths (asymptote)
    #[arg(long, global = true, value_name = "N")]
    pub grid: Option<usize>,
    /// Fraction of the chord width cut from each end of the profile window
    #[arg(long, global = true, value_name = "F")]
    pub margin: Option<f64>,
    /// Largest power tried by algfit and quadric-check
    #[arg(long = "m-max", global = true, value_name = "N")]
    pub m_max: Option<usize>,
    /// Acceptance tolerance; the default depends on the command
    #[arg(long, global = true, value_name = "F")]
    pub tol: Option<f64>,
    /// Gauss-Legendre order per smooth piece
    #[arg(long = "quad-order", global = true, value_name = "N")]
    pub quad_order: Option<usize>,
    /// Number of sampled directions (moments, detect)
    #[arg(long, global = true, value_name = "N")]
    pub directions: Option<usize>,
    /// Moment order for the moments command
    #[arg(long, global = true, value_name = "K")]
    pub k: Option<usize>,
    /// Explicit window `a,b`: a t-range for profile, algfit and
    /// quadric-check, a depth range (chord-width units) for asymptote
    #[arg(long, global = true, value_name = "A,B", allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}
