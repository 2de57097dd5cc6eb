//! Kinematics of a hypothetical motion with constant `μ` and the
//! curvature-matching condition it imposes on the size `√I`.
//!
//! Along such a motion the shape moves on a level curve of `μ` with speed
//! `|dx/ds| = v`, normalised to `v = √3` by the scale symmetry. The sign `ε`
//! of the direction of travel is absorbed into the angular momentum: every
//! `C` taken by this module is `εC`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{closed_forms_mu_rho, mu_jet, InvariantFieldValues};
use crate::geometry::{ShapePoint, SymmetricInvariants};

/// Shape speed `v` after normalisation.
pub const SHAPE_SPEED: f64 = 1.732_050_807_568_877_2;

/// Below this `|∂μ/∂x|` a shape counts as a central configuration.
pub const CRITICAL_GRADIENT: f64 = 1e-10;

/// Parameters of a constant-`μ` motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessaryConditionContext {
    pub mu0: f64,
    /// Angular momentum with the direction sign absorbed.
    pub c: f64,
    pub energy: f64,
}

impl NecessaryConditionContext {
    pub fn new(mu0: f64, c: f64, energy: f64) -> Result<Self> {
        check_mu(mu0)?;
        Ok(Self { mu0, c, energy })
    }

    pub fn speed(&self) -> f64 {
        SHAPE_SPEED
    }
}

/// Rejects `μ < 3`, which no shape attains.
pub fn check_mu(mu0: f64) -> Result<()> {
    if !(mu0 >= 3.0) || !mu0.is_finite() {
        return Err(Error::UnphysicalMu(mu0));
    }
    Ok(())
}

fn check_sign(epsilon: f64) -> Result<()> {
    if epsilon != 1.0 && epsilon != -1.0 {
        return Err(Error::InvalidArgument(format!("direction sign must be ±1, got {epsilon}")));
    }
    Ok(())
}

struct LocalJet {
    grad: [f64; 2],
    grad_norm: f64,
    /// `μ_y² μ_xx − 2 μ_x μ_y μ_xy + μ_x² μ_yy`.
    h: f64,
}

fn local_jet(shape: &ShapePoint) -> Result<LocalJet> {
    let jet = mu_jet(shape)?;
    let grad_norm = jet.grad_norm_sqr().sqrt();
    if grad_norm <= CRITICAL_GRADIENT {
        return Err(Error::CriticalPoint);
    }
    Ok(LocalJet { grad: jet.grad, grad_norm, h: implicit_curvature_numerator(jet.grad, jet.hess) })
}

/// `f_y² f_xx − 2 f_x f_y f_xy + f_x² f_yy`.
pub fn implicit_curvature_numerator(grad: [f64; 2], hess: [[f64; 2]; 2]) -> f64 {
    let [fx, fy] = grad;
    fy * fy * hess[0][0] - 2.0 * fx * fy * hess[0][1] + fx * fx * hess[1][1]
}

/// Signed curvature of the curve `f = const` travelled along
/// `ε(−f_y, f_x)`.
pub fn implicit_curve_curvature(grad: [f64; 2], hess: [[f64; 2]; 2], epsilon: f64) -> f64 {
    let n = grad[0].hypot(grad[1]);
    epsilon * implicit_curvature_numerator(grad, hess) / (n * n * n)
}

/// `dx/ds = (ε v/|∂μ/∂x|)(−∂μ/∂y, ∂μ/∂x)`.
pub fn level_set_velocity(shape: &ShapePoint, epsilon: f64) -> Result<[f64; 2]> {
    check_sign(epsilon)?;
    let jet = local_jet(shape)?;
    let k = epsilon * SHAPE_SPEED / jet.grad_norm;
    Ok([-k * jet.grad[1], k * jet.grad[0]])
}

/// Curvature of the orbit forced by the equation of motion when the shape
/// moves along the level curve with speed `v`, for the given size `√I`.
pub fn orbit_curvature(shape: &ShapePoint, ctx: &NecessaryConditionContext, sqrt_i: f64, epsilon: f64) -> Result<f64> {
    check_sign(epsilon)?;
    let jet = local_jet(shape)?;
    let v = ctx.speed();
    let q = shape.conformal_factor();
    let x_dot_grad = shape.x * jet.grad[0] + shape.y * jet.grad[1];
    // the display carries the raw C = εC_absorbed
    let raw_c = epsilon * ctx.c;
    Ok((-4.0 * raw_c / v + 8.0 * epsilon / (3.0 * jet.grad_norm) * x_dot_grad) / q
        - 3.0 * epsilon * sqrt_i * jet.grad_norm / (v * v))
}

/// Curvature of the level curve through `shape`, travelled in direction `ε`.
pub fn level_curvature(shape: &ShapePoint, epsilon: f64) -> Result<f64> {
    check_sign(epsilon)?;
    let jet = local_jet(shape)?;
    Ok(epsilon * jet.h / jet.grad_norm.powi(3))
}

/// The necessary condition in shape coordinates:
///
/// ```text
/// √I = −4C/(√3 q |∂μ|) + 8 (x·∂μ)/(3 q |∂μ|²) − H/|∂μ|⁴,   q = 1 + (4/3)|x|²
/// ```
pub fn required_sqrt_i_xy(shape: &ShapePoint, c: f64) -> Result<f64> {
    let jet = local_jet(shape)?;
    let q = shape.conformal_factor();
    let g = jet.grad_norm;
    let x_dot_grad = shape.x * jet.grad[0] + shape.y * jet.grad[1];
    Ok(-4.0 * c / (3f64.sqrt() * q * g) + 8.0 * x_dot_grad / (3.0 * q * g * g) - jet.h / g.powi(4))
}

fn sqrt_i_from_fields(f: &InvariantFieldValues, c: f64) -> Result<f64> {
    let g = f.grad_norm_sq;
    if !(g > 0.0) {
        return Err(Error::CriticalPoint);
    }
    Ok(-2.0 * c / g.sqrt() + f.lambda / (2.0 * g * g) - f.laplacian / g)
}

/// The necessary condition in invariant form,
/// `√I = −2C/|∇μ| + λ/(2|∇μ|⁴) − Δμ/|∇μ|²`, through the closed forms.
pub fn required_sqrt_i(inv: &SymmetricInvariants, c: f64) -> Result<f64> {
    required_sqrt_i_mu_rho(inv.mu, inv.rho, c)
}

/// [`required_sqrt_i`] for bare `(μ, ρ)`, also off the physical region.
pub fn required_sqrt_i_mu_rho(mu: f64, rho: f64, c: f64) -> Result<f64> {
    sqrt_i_from_fields(&closed_forms_mu_rho(mu, rho)?, c)
}

/// Relative step of the derivative stencil in `ρ`.
pub const RHO_STEP: f64 = 1e-3;

/// `∂√I/∂ρ` at fixed `μ` by a five-point stencil with step `10⁻³ ρ`.
pub fn d_sqrt_i_d_rho(mu: f64, rho: f64, c: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::OutsideDomain(rho));
    }
    let h = RHO_STEP * rho;
    let f = |r: f64| required_sqrt_i_mu_rho(mu, r, c);
    Ok((-f(rho + 2.0 * h)? + 8.0 * f(rho + h)? - 8.0 * f(rho - h)? + f(rho - 2.0 * h)?) / (12.0 * h))
}

/// Right-hand side of the energy condition,
///
/// ```text
/// E = (1/(2I²)) ((Dρ)²/|∇μ|²) (∂√I/∂ρ)² + (C² + 1)/(2I) − μ/√I,
/// ```
///
/// with `√I` from the necessary condition.
pub fn energy_rhs(rho: f64, mu0: f64, c: f64) -> Result<f64> {
    let fields = closed_forms_mu_rho(mu0, rho)?;
    let sqrt_i = sqrt_i_from_fields(&fields, c)?;
    if !(sqrt_i > 0.0) {
        return Err(Error::UnphysicalSize(sqrt_i));
    }
    let i = sqrt_i * sqrt_i;
    let slope = d_sqrt_i_d_rho(mu0, rho, c)?;
    Ok(fields.d_rho_sq / fields.grad_norm_sq * slope * slope / (2.0 * i * i) + (c * c + 1.0) / (2.0 * i) - mu0 / sqrt_i)
}

/// `energy_rhs − E`; vanishes identically on any constant-`μ` motion.
pub fn energy_residual(rho: f64, ctx: &NecessaryConditionContext) -> Result<f64> {
    Ok(energy_rhs(rho, ctx.mu0, ctx.c)? - ctx.energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::ShapeSampler;
    use approx::assert_relative_eq;

    #[test]
    fn velocity_is_tangent_with_speed_root_three() {
        let mut sampler = ShapeSampler::new(5);
        for _ in 0..200 {
            let shape = sampler.sample_non_degenerate();
            let g = crate::fields::mu_gradient(&shape).unwrap();
            let v = level_set_velocity(&shape, 1.0).unwrap();
            let w = level_set_velocity(&shape, -1.0).unwrap();
            let gn = g[0].hypot(g[1]);
            assert!((v[0] * g[0] + v[1] * g[1]).abs() / gn <= 1e-12);
            assert!((v[0].hypot(v[1]) - 3f64.sqrt()).abs() <= 1e-12);
            assert_eq!(w, [-v[0], -v[1]]);
        }
    }

    #[test]
    fn critical_points_and_bad_signs_rejected() {
        let l = ShapePoint::LAGRANGE_UPPER;
        assert_eq!(level_set_velocity(&l, 1.0), Err(Error::CriticalPoint));
        assert_eq!(level_curvature(&ShapePoint::new(0.0, 0.0), 1.0), Err(Error::CriticalPoint));
        assert!(level_set_velocity(&ShapePoint::new(0.2, 0.3), 0.5).is_err());
    }

    #[test]
    fn circle_curvature_oracle() {
        for r in [0.5, 1.0, 3.0] {
            let (x, y) = (r * 0.6, r * 0.8);
            let grad = [2.0 * x, 2.0 * y];
            let hess = [[2.0, 0.0], [0.0, 2.0]];
            assert_relative_eq!(implicit_curve_curvature(grad, hess, 1.0), 1.0 / r, max_relative = 1e-14);
            assert_relative_eq!(implicit_curve_curvature(grad, hess, -1.0), -1.0 / r, max_relative = 1e-14);
        }
    }

    #[test]
    fn curvatures_match_at_required_size() {
        let mut sampler = ShapeSampler::new(8);
        for k in 0..200 {
            let shape = sampler.sample_non_degenerate();
            let c = (k as f64 - 100.0) / 40.0;
            let eps = if k % 2 == 0 { 1.0 } else { -1.0 };
            let ctx = NecessaryConditionContext { mu0: 3.0, c, energy: 0.0 };
            let sqrt_i = required_sqrt_i_xy(&shape, c).unwrap();
            let k_orbit = orbit_curvature(&shape, &ctx, sqrt_i, eps).unwrap();
            let k_level = level_curvature(&shape, eps).unwrap();
            assert!((k_orbit - k_level).abs() <= 1e-9 * k_level.abs().max(1.0), "{k_orbit} vs {k_level}");
        }
    }

    #[test]
    fn orbit_curvature_is_odd_in_direction() {
        let shape = ShapePoint::new(0.3, 1.1);
        let ctx = NecessaryConditionContext { mu0: 3.0, c: 0.7, energy: 0.0 };
        let a = orbit_curvature(&shape, &ctx, 0.8, 1.0).unwrap();
        let b = orbit_curvature(&shape, &ctx, 0.8, -1.0).unwrap();
        assert_relative_eq!(a, -b, max_relative = 1e-15);
    }

    #[test]
    fn imaginary_axis_reduces_to_y_term() {
        let shape = ShapePoint::new(0.0, 1.4);
        let g = crate::fields::mu_gradient(&shape).unwrap();
        assert!(g[0].abs() < 1e-14);
        let ctx = NecessaryConditionContext { mu0: 3.0, c: 0.0, energy: 0.0 };
        let k = orbit_curvature(&shape, &ctx, 0.0, 1.0).unwrap();
        let q = shape.conformal_factor();
        let expected = 8.0 / (3.0 * g[1].abs()) * shape.y * g[1] / q;
        assert_relative_eq!(k, expected, max_relative = 1e-14);
    }

    #[test]
    fn routes_agree() {
        let mut sampler = ShapeSampler::new(13);
        for k in 0..500 {
            let shape = sampler.sample_non_degenerate();
            let c = (k % 7) as f64 - 3.0;
            let inv = shape.symmetric_invariants().unwrap();
            let a = required_sqrt_i(&inv, c).unwrap();
            let b = required_sqrt_i_xy(&shape, c).unwrap();
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-3), "{a} vs {b} at {shape:?}");
            let image = shape.cyclic_image().unwrap();
            let d = required_sqrt_i_xy(&image, c).unwrap();
            assert!((d - b).abs() <= 1e-10 * b.abs().max(1.0), "{d} vs {b}");
        }
    }

    #[test]
    fn limit_at_zero_rho() {
        let v = required_sqrt_i_mu_rho(3.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, 16.0 / 51.0, max_relative = 1e-5);
    }

    #[test]
    fn collinear_point_drops_shape_term() {
        // a collinear shape on the level set of its own μ
        let shape = ShapePoint::new(0.9, 0.0);
        let inv = shape.symmetric_invariants().unwrap();
        let c = 0.4;
        let sqrt_i = required_sqrt_i(&inv, c).unwrap();
        assert!(shape.collinearity_indicator().abs() < 1e-15);
        let i = sqrt_i * sqrt_i;
        let expected = (c * c + 1.0) / (2.0 * i) - inv.mu / sqrt_i;
        let rhs = energy_rhs(inv.rho, inv.mu, c).unwrap();
        assert!((rhs - expected).abs() <= 1e-6 * expected.abs(), "{rhs} vs {expected}");
    }

    #[test]
    fn residual_vanishes_at_reference() {
        let inv = ShapePoint::new(0.4, 0.9).symmetric_invariants().unwrap();
        let other = ShapePoint::new(0.3, 0.9).symmetric_invariants().unwrap();
        let (mu0, c, rho) = (inv.mu, -10.0, inv.rho);
        let e = energy_rhs(rho, mu0, c).unwrap();
        let ctx = NecessaryConditionContext::new(mu0, c, e).unwrap();
        assert_eq!(energy_residual(rho, &ctx).unwrap(), 0.0);
        assert!(energy_residual(other.rho, &ctx).unwrap().abs() > 1e-6);
    }

    #[test]
    fn mu_below_three_rejected() {
        assert_eq!(NecessaryConditionContext::new(2.5, 0.0, 0.0), Err(Error::UnphysicalMu(2.5)));
    }
}
