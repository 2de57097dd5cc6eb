//! Grid search for an energy that satisfies the energy condition on the
//! whole physical `ρ`-interval of a level curve.
//!
//! For fixed `C` the best energy is the midpoint of the range of the
//! right-hand side, and the smallest achievable supremum of the residual is
//! half that range.

use serde::{Deserialize, Serialize};

use super::levelset::{find_seed, trace_level_set, SeedHint};
use super::necessary::{check_mu, energy_rhs};
use super::series::branch_c_values;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub c: f64,
    /// `false` when the necessary condition gives `√I ≤ 0` somewhere on the
    /// interval; no motion exists for such `C`.
    pub physical: bool,
    /// `min_E sup_ρ |residual|`; infinite when not physical.
    pub min_sup_residual: f64,
    pub best_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub mu0: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    /// Smallest `min_sup_residual` over the `C` grid.
    pub fn min_over_c(&self) -> f64 {
        self.entries.iter().map(|e| e.min_sup_residual).fold(f64::INFINITY, f64::min)
    }

    /// Every `C` leaves a residual above `threshold`.
    pub fn excludes_all(&self, threshold: f64) -> bool {
        self.entries.iter().all(|e| e.min_sup_residual > threshold)
    }
}

/// `n` equally spaced values spanning both branch roots extended by `margin`.
pub fn default_c_grid(mu0: f64, margin: f64, n: usize) -> Result<Vec<f64>> {
    let (c1, c2) = branch_c_values(mu0)?;
    let (lo, hi) = (c1.min(c2) - margin, c1.max(c2) + margin);
    if n < 2 {
        return Err(Error::InvalidArgument("C grid needs at least two points".into()));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

pub const RHO_NODES: usize = 201;

/// Runs the sweep over `c_grid` on the `ρ`-interval of the traced level
/// curve `μ = μ₀`.
pub fn conjecture_sweep(mu0: f64, c_grid: &[f64]) -> Result<SweepResult> {
    check_mu(mu0)?;
    if c_grid.is_empty() {
        return Err(Error::InvalidArgument("empty C grid".into()));
    }
    let level = trace_level_set(mu0, find_seed(mu0, SeedHint::Auto)?)?;
    let (lo, hi) = (level.rho_min, level.rho_max);
    let nodes: Vec<f64> = (0..RHO_NODES).map(|i| lo + (hi - lo) * i as f64 / (RHO_NODES - 1) as f64).collect();
    let mut entries = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let values: Result<Vec<f64>> = nodes.iter().map(|&r| energy_rhs(r, mu0, c)).collect();
        let entry = match values {
            Ok(v) => {
                let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let min = v.iter().copied().fold(f64::INFINITY, f64::min);
                SweepEntry {
                    c,
                    physical: true,
                    min_sup_residual: 0.5 * (max - min),
                    best_energy: Some(0.5 * (max + min)),
                }
            }
            Err(Error::UnphysicalSize(_)) => {
                SweepEntry { c, physical: false, min_sup_residual: f64::INFINITY, best_energy: None }
            }
            Err(e) => return Err(e),
        };
        entries.push(entry);
    }
    Ok(SweepResult { mu0, rho_min: lo, rho_max: hi, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spans_roots() {
        let g = default_c_grid(3.0, 2.0, 101).unwrap();
        let (c1, c2) = branch_c_values(3.0).unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[0] - (c1 - 2.0)).abs() < 1e-15 && (g[100] - (c2 + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn sweep_excludes_every_c_at_four() {
        let grid = default_c_grid(4.0, 2.0, 21).unwrap();
        let r = conjecture_sweep(4.0, &grid).unwrap();
        assert!(r.rho_max > r.rho_min);
        assert!(r.excludes_all(1e-6), "min {}", r.min_over_c());
    }
}
