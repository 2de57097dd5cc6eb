//! `saari`: simulations and verification sweeps for the shape-sphere
//! reduction of the planar equal-mass three-body problem.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "saari", version, about = "Shape-sphere three-body simulations and constant-mu checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Each may also be set in the config file.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat `key = value` config file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Random seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Tolerance; its meaning depends on the subcommand.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a three-body orbit and classify it.
    Simulate(SimulateArgs),
    /// Cross-check the invariant fields and symmetries on random shapes.
    VerifyIdentities(VerifyIdentitiesArgs),
    /// Check the sign obstruction to constant-mu orbits over a mu grid.
    VerifyProof(VerifyProofArgs),
    /// Trace a level curve of mu on the shape plane.
    TraceLevelset(TraceLevelsetArgs),
    /// List the five central configurations.
    CentralConfigs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Named initial condition (lagrange_circular, euler_collinear_circular,
    /// equilateral_freefall, generic_perturbed).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Explicit initial condition: q1x,q1y,q2x,q2y,q3x,q3y,v1x,v1y,v2x,v2y,v3x,v3y
    /// in the center-of-mass frame.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Integration time span.
    #[arg(long)]
    pub t_span: Option<f64>,
    /// Sampling interval.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Integrate the reduced equations instead of Newton's.
    #[arg(long)]
    pub reduced: bool,
    /// Drift tolerance for the constant-mu classification.
    #[arg(long)]
    pub classify_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyIdentitiesArgs {
    /// Number of random shapes.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyProofArgs {
    /// Explicit mu values (comma separated); overrides the log grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub mu: Vec<f64>,
    /// Lower end of the log grid.
    #[arg(long)]
    pub mu_min: Option<f64>,
    /// Upper end of the log grid.
    #[arg(long)]
    pub mu_max: Option<f64>,
    /// Number of log grid points.
    #[arg(long)]
    pub mu_points: Option<usize>,
    /// Also locate the roots in C of the order-sqrt(rho) coefficient.
    #[arg(long = "C-scan", alias = "c-scan")]
    pub c_scan: bool,
}

#[derive(Debug, Args)]
pub struct TraceLevelsetArgs {
    /// Level value, at least 3.
    #[arg(long)]
    pub mu0: Option<f64>,
    /// Seed hint: lagrange, euler, auto, or a point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub seed_near: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
