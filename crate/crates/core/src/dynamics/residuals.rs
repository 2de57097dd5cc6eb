//! Finite-difference residuals of the identities that hold along solutions.
//!
//! Derivatives use three-point stencils on the (possibly non-uniform) sample
//! grid, so residuals of an accurately integrated orbit shrink quadratically
//! as the sampling is refined.

use crate::error::{Error, Result};
use crate::fields::mu_jet;

use super::trajectory::Trajectory;

/// Samples closer than this to a collision are left out of residual series.
pub const NEAR_COLLISION_DISTANCE: f64 = 1e-3;

/// Residual values at interior samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries<T> {
    pub t: Vec<f64>,
    pub values: Vec<T>,
    /// Interior samples skipped because a stencil point was near a collision.
    pub excluded: usize,
}

impl ResidualSeries<f64> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl ResidualSeries<[f64; 2]> {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max)
    }

    /// Largest magnitude of one component.
    pub fn max_abs_component(&self, k: usize) -> f64 {
        self.values.iter().map(|v| v[k].abs()).fold(0.0, f64::max)
    }
}

/// First and second derivative weights at the middle of three nodes.
fn stencil(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let h1 = x[1] - x[0];
    let h2 = x[2] - x[1];
    let d1 = [-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))];
    let d2 = [2.0 / (h1 * (h1 + h2)), -2.0 / (h1 * h2), 2.0 / (h2 * (h1 + h2))];
    (d1, d2)
}

fn apply(w: [f64; 3], f: [f64; 3]) -> f64 {
    w[0] * f[0] + w[1] * f[1] + w[2] * f[2]
}

fn interior<T>(traj: &Trajectory, mut f: impl FnMut(usize) -> Result<T>) -> Result<ResidualSeries<T>> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    let near: Vec<bool> = traj.samples.iter().map(|s| s.config.min_separation() < NEAR_COLLISION_DISTANCE).collect();
    let mut out = ResidualSeries { t: Vec::new(), values: Vec::new(), excluded: 0 };
    for i in 1..n - 1 {
        if near[i - 1] || near[i] || near[i + 1] {
            out.excluded += 1;
            continue;
        }
        out.t.push(traj.samples[i].t);
        out.values.push(f(i)?);
    }
    Ok(out)
}

/// `d²I/dt² − (4E + 2U)`.
pub fn lagrange_jacobi_residual(traj: &Trajectory) -> Result<ResidualSeries<f64>> {
    let s = &traj.samples;
    interior(traj, |i| {
        let (_, d2) = stencil([s[i - 1].t, s[i].t, s[i + 1].t]);
        let i_dd = apply(d2, [s[i - 1].inertia, s[i].inertia, s[i + 1].inertia]);
        Ok(i_dd - (4.0 * s[i].energy + 2.0 * s[i].config.potential()?))
    })
}

/// `d/ds(|dx/ds|²/6) − √I dμ/ds`, the left side evaluated as `x'·x''/3`.
pub fn saari_relation_residual(traj: &Trajectory) -> Result<ResidualSeries<f64>> {
    let s = &traj.samples;
    interior(traj, |i| {
        let (d1, d2) = stencil([s[i - 1].s, s[i].s, s[i + 1].s]);
        let xs = [s[i - 1].shape.x, s[i].shape.x, s[i + 1].shape.x];
        let ys = [s[i - 1].shape.y, s[i].shape.y, s[i + 1].shape.y];
        let mus = [
            s[i - 1].config.configurational_measure()?,
            s[i].config.configurational_measure()?,
            s[i + 1].config.configurational_measure()?,
        ];
        let lhs = (apply(d1, xs) * apply(d2, xs) + apply(d1, ys) * apply(d2, ys)) / 3.0;
        let rhs = s[i].inertia.sqrt() * apply(d1, mus);
        Ok(lhs - rhs)
    })
}

/// `x'' − [(4C − (8/3) x∧x')/(1 + (4/3)|x|²) · (y', −x') + 3√I ∇μ]` with
/// derivatives in `s`.
pub fn shape_eom_residual(traj: &Trajectory) -> Result<ResidualSeries<[f64; 2]>> {
    let s = &traj.samples;
    interior(traj, |i| {
        let (d1, d2) = stencil([s[i - 1].s, s[i].s, s[i + 1].s]);
        let xs = [s[i - 1].shape.x, s[i].shape.x, s[i + 1].shape.x];
        let ys = [s[i - 1].shape.y, s[i].shape.y, s[i + 1].shape.y];
        let (xp, yp) = (apply(d1, xs), apply(d1, ys));
        let (xpp, ypp) = (apply(d2, xs), apply(d2, ys));
        let shape = s[i].shape;
        let grad = mu_jet(&shape)?.grad;
        let q = shape.conformal_factor();
        let coef = (4.0 * s[i].angular_momentum - 8.0 / 3.0 * (shape.x * yp - shape.y * xp)) / q;
        let sqrt_i = s[i].inertia.sqrt();
        Ok([xpp - (coef * yp + 3.0 * sqrt_i * grad[0]), ypp - (-coef * xp + 3.0 * sqrt_i * grad[1])])
    })
}
