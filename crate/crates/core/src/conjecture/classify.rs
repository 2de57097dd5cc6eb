//! Sorting integrated trajectories by how their shape and `μ` behave.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The shape did not change.
    #[serde(rename = "homographic")]
    Homographic,
    /// `μ` stayed constant while the shape changed; never expected.
    #[serde(rename = "constant-μ non-homographic candidate")]
    ConstantMuCandidate,
    #[serde(rename = "generic")]
    Generic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Homographic => "homographic",
            Verdict::ConstantMuCandidate => "constant-μ non-homographic candidate",
            Verdict::Generic => "generic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// `max |μ(t) − mean μ|`.
    pub mu_drift: f64,
    /// `max |ζ(t) − ζ(t₀)|`.
    pub shape_drift: f64,
    pub verdict: Verdict,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

pub fn classify_trajectory(traj: &Trajectory, tol: f64) -> Result<Classification> {
    if traj.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: traj.len() });
    }
    let mus: Vec<f64> = traj.samples.iter().map(|s| s.config.configurational_measure()).collect::<Result<_>>()?;
    let mean = mus.iter().sum::<f64>() / mus.len() as f64;
    let mu_drift = mus.iter().map(|m| (m - mean).abs()).fold(0.0, f64::max);
    let z0 = traj.samples[0].shape.zeta();
    let shape_drift = traj.samples.iter().map(|s| (s.shape.zeta() - z0).norm()).fold(0.0, f64::max);
    let verdict = if shape_drift <= tol {
        Verdict::Homographic
    } else if mu_drift <= tol {
        Verdict::ConstantMuCandidate
    } else {
        Verdict::Generic
    };
    Ok(Classification { mu_drift, shape_drift, verdict })
}
