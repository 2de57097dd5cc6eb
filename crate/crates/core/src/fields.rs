//! The configurational measure as a field on the shape plane and its
//! permutation-invariant differential invariants.
//!
//! Every invariant is available through two independent routes:
//!
//! * the *xy route* differentiates `μ(x, y) = √(1/2 + (2/3)|x|²)(1 + 1/r₁ + 1/r₂)`
//!   analytically (first and second partials) and contracts with the inverse
//!   shape-sphere metric `g^{ij} = (3/4)(1 + (4/3)|x|²)² δ^{ij}`;
//! * the *closed-form route* evaluates polynomial expressions in `(μ, ρ)` with
//!   `ν = √(2μρ + 3ρ²)`, valid for any `μ, ρ` with `2μρ + 3ρ² ≥ 0`.
//!
//! The two routes share nothing but the definition of the shape variable, so
//! agreement between them is a meaningful check of both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ShapePoint, SymmetricInvariants};

/// Value, gradient and Hessian of a scalar field in `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl Jet {
    fn product(a: &Jet, b: &Jet) -> Jet {
        let hess = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                a.hess[i][j] * b.value + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] + a.value * b.hess[i][j]
            })
        });
        Jet {
            value: a.value * b.value,
            grad: [a.grad[0] * b.value + a.value * b.grad[0], a.grad[1] * b.value + a.value * b.grad[1]],
            hess,
        }
    }

    /// `|∂f/∂x|²` (Euclidean).
    pub fn grad_norm_sqr(&self) -> f64 {
        self.grad[0] * self.grad[0] + self.grad[1] * self.grad[1]
    }
}

/// `μ₃ = √(1/2 + (2/3)(x² + y²))` with derivatives.
fn mu3_jet(x: f64, y: f64) -> Jet {
    let m = (0.5 + 2.0 / 3.0 * (x * x + y * y)).sqrt();
    let p = [x, y];
    let mut hess = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            hess[i][j] = 2.0 / 3.0 * delta / m - 4.0 / 9.0 * p[i] * p[j] / (m * m * m);
        }
    }
    Jet { value: m, grad: [2.0 / 3.0 * x / m, 2.0 / 3.0 * y / m], hess }
}

/// `1/|p − (cx, 0)|` with derivatives.
fn inverse_distance_jet(x: f64, y: f64, cx: f64) -> Jet {
    let d = [x - cx, y];
    let r2 = d[0] * d[0] + d[1] * d[1];
    let r = r2.sqrt();
    let r3 = r2 * r;
    let r5 = r3 * r2;
    let mut hess = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            hess[i][j] = 3.0 * d[i] * d[j] / r5 - delta / r3;
        }
    }
    Jet { value: 1.0 / r, grad: [-d[0] / r3, -d[1] / r3], hess }
}

/// `μ(x, y)` with analytic gradient and Hessian.
pub fn mu_jet(shape: &ShapePoint) -> Result<Jet> {
    shape.check_collision()?;
    let (x, y) = (shape.x, shape.y);
    let m3 = mu3_jet(x, y);
    let a = inverse_distance_jet(x, y, 0.5);
    let b = inverse_distance_jet(x, y, -0.5);
    let mut sum = Jet { value: 1.0 + a.value + b.value, grad: [0.0; 2], hess: [[0.0; 2]; 2] };
    for i in 0..2 {
        sum.grad[i] = a.grad[i] + b.grad[i];
        for j in 0..2 {
            sum.hess[i][j] = a.hess[i][j] + b.hess[i][j];
        }
    }
    Ok(Jet::product(&m3, &sum))
}

/// `ρ = μ₃³/(r₁ r₂)` with analytic gradient (Hessian left zero).
pub fn rho_gradient(shape: &ShapePoint) -> Result<(f64, [f64; 2])> {
    shape.check_collision()?;
    let (x, y) = (shape.x, shape.y);
    let m3 = mu3_jet(x, y);
    let a = inverse_distance_jet(x, y, 0.5);
    let b = inverse_distance_jet(x, y, -0.5);
    let m = m3.value;
    let value = m * m * m * a.value * b.value;
    let grad = [0, 1].map(|i| {
        3.0 * m * m * m3.grad[i] * a.value * b.value + m * m * m * (a.grad[i] * b.value + a.value * b.grad[i])
    });
    Ok((value, grad))
}

/// Configurational measure `μ(x, y)`.
pub fn mu_field(shape: &ShapePoint) -> Result<f64> {
    let (r1, r2) = shape.check_collision()?;
    Ok(shape.mu3() * (1.0 + 1.0 / r1 + 1.0 / r2))
}

/// Metric-free partials `(∂μ/∂x, ∂μ/∂y)`.
pub fn mu_gradient(shape: &ShapePoint) -> Result<[f64; 2]> {
    Ok(mu_jet(shape)?.grad)
}

/// Inverse-metric weight `(3/4)(1 + (4/3)|x|²)²`.
pub fn metric_weight(shape: &ShapePoint) -> f64 {
    let q = shape.conformal_factor();
    0.75 * q * q
}

/// `|∇μ|² = (3/4)(1 + (4/3)|x|²)² |∂μ/∂x|²`.
pub fn grad_norm_sq_xy(shape: &ShapePoint) -> Result<f64> {
    Ok(metric_weight(shape) * mu_jet(shape)?.grad_norm_sqr())
}

/// Laplace–Beltrami operator of `μ` for the conformal shape metric.
pub fn laplacian_xy(shape: &ShapePoint) -> Result<f64> {
    let jet = mu_jet(shape)?;
    Ok(metric_weight(shape) * (jet.hess[0][0] + jet.hess[1][1]))
}

/// `λ = g^{ij} ∂_i μ ∂_j |∇μ|²`, differentiated through the analytic Hessian.
pub fn lambda_xy(shape: &ShapePoint) -> Result<f64> {
    let jet = mu_jet(shape)?;
    Ok(lambda_from_jet(shape, &jet))
}

fn lambda_from_jet(shape: &ShapePoint, jet: &Jet) -> f64 {
    let w = metric_weight(shape);
    let q = shape.conformal_factor();
    // ∂W = 4 q x
    let dw = [4.0 * q * shape.x, 4.0 * q * shape.y];
    let g = jet.grad;
    let g2 = jet.grad_norm_sqr();
    let hg = [jet.hess[0][0] * g[0] + jet.hess[0][1] * g[1], jet.hess[1][0] * g[0] + jet.hess[1][1] * g[1]];
    let d_grad_sq = [0, 1].map(|i| dw[i] * g2 + 2.0 * w * hg[i]);
    w * (g[0] * d_grad_sq[0] + g[1] * d_grad_sq[1])
}

/// `Dφ = (3/4)(1 + (4/3)|x|²)² (∂μ/∂x ∧ ∂φ/∂x)` for a field with the given
/// metric-free gradient.
pub fn d_operator(shape: &ShapePoint, phi_gradient: [f64; 2]) -> Result<f64> {
    let g = mu_gradient(shape)?;
    Ok(metric_weight(shape) * (g[0] * phi_gradient[1] - g[1] * phi_gradient[0]))
}

/// Values of the invariant fields at one shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantFieldValues {
    pub grad_norm_sq: f64,
    pub laplacian: f64,
    pub lambda: f64,
    pub d_rho_sq: f64,
    pub nu: f64,
}

impl InvariantFieldValues {
    pub fn as_array(&self) -> [f64; 5] {
        [self.grad_norm_sq, self.laplacian, self.lambda, self.d_rho_sq, self.nu]
    }

    pub const NAMES: [&'static str; 5] = ["grad_norm_sq", "laplacian", "lambda", "d_rho_sq", "nu"];
}

/// All invariant fields by the xy route.
pub fn field_values_xy(shape: &ShapePoint) -> Result<InvariantFieldValues> {
    let jet = mu_jet(shape)?;
    let w = metric_weight(shape);
    let (_, grad_rho) = rho_gradient(shape)?;
    let d_rho = w * (jet.grad[0] * grad_rho[1] - jet.grad[1] * grad_rho[0]);
    Ok(InvariantFieldValues {
        grad_norm_sq: w * jet.grad_norm_sqr(),
        laplacian: w * (jet.hess[0][0] + jet.hess[1][1]),
        lambda: lambda_from_jet(shape, &jet),
        d_rho_sq: d_rho * d_rho,
        nu: shape.symmetric_invariants()?.nu,
    })
}

fn nu_checked(mu: f64, rho: f64) -> Result<f64> {
    let arg = 2.0 * mu * rho + 3.0 * rho * rho;
    if arg < 0.0 || !arg.is_finite() {
        return Err(Error::OutsideDomain(arg));
    }
    Ok(arg.sqrt())
}

/// `|∇μ|²` in `(μ, ρ)`.
pub fn grad_norm_sq_closed(mu: f64, rho: f64) -> Result<f64> {
    let s = nu_checked(mu, rho)?;
    let (m, r) = (mu, rho);
    let m2 = m * m;
    Ok(-m2 + 2.0 * m2 * m2 + 6.0 * m * r - 9.0 * r * r - 3.0 * (2.0 * m2 - m * r + 3.0 * r * r) * s)
}

/// `Δμ` in `(μ, ρ)`.
pub fn laplacian_closed(mu: f64, rho: f64) -> Result<f64> {
    let s = nu_checked(mu, rho)?;
    Ok(mu + 2.0 * mu * mu * mu + 6.0 * rho - 6.0 * mu * s)
}

/// `λ` in `(μ, ρ)`.
pub fn lambda_closed(mu: f64, rho: f64) -> Result<f64> {
    let s = nu_checked(mu, rho)?;
    let (m, r) = (mu, rho);
    let (m2, m3, m4, m5, m7) = (m * m, m.powi(3), m.powi(4), m.powi(5), m.powi(7));
    let (r2, r3, r4, r5) = (r * r, r.powi(3), r.powi(4), r.powi(5));
    let rational = 4.0 * m3 - 24.0 * m5 + 32.0 * m7 - 72.0 * m2 * r + 660.0 * m4 * r + 324.0 * m * r2 + 36.0 * m3 * r2
        - 432.0 * r3
        + 891.0 * m2 * r3
        + 2349.0 * m * r4
        - 243.0 * r5;
    let radical = 24.0 * m3 - 60.0 * m5 - 156.0 * m2 * r + 28.0 * m4 * r + 324.0 * m * r2
        - 93.0 * m3 * r2
        - 216.0 * r3
        - 27.0 * m2 * r3
        + 81.0 * m * r4;
    Ok(0.5 * (rational + 3.0 * radical * s))
}

/// The two bracketed parts `(A, B)` of `(Dρ)² = ρ²(2μ+3ρ)/4 · (−A + B)`.
fn d_rho_parts(mu: f64, rho: f64, s: f64) -> (f64, f64) {
    let (m, r) = (mu, rho);
    let a = (2.0 * m + 3.0 * r)
        * (4.0 * m.powi(4) + 134.0 * m * r - 12.0 * m.powi(3) * r - 177.0 * r * r + 9.0 * m * m * r * r);
    let b = 2.0 * (28.0 * m.powi(3) + 108.0 * r - 36.0 * m * m * r - 45.0 * m * r * r + 54.0 * r.powi(3)) * s;
    (a, b)
}

/// `(Dρ)²` in `(μ, ρ)`.
pub fn d_rho_sq_closed(mu: f64, rho: f64) -> Result<f64> {
    let s = nu_checked(mu, rho)?;
    let (a, b) = d_rho_parts(mu, rho, s);
    Ok(rho * rho * (2.0 * mu + 3.0 * rho) / 4.0 * (b - a))
}

/// Cancellation factor `(|A| + |B|)/|B − A|` of the `(Dρ)²` closed form.
///
/// The relative rounding error of [`d_rho_sq_closed`] is roughly this factor
/// times machine epsilon. It diverges where `(Dρ)² = 0` (collinear and
/// isosceles shapes, and the central configurations).
pub fn d_rho_sq_condition(mu: f64, rho: f64) -> Result<f64> {
    let s = nu_checked(mu, rho)?;
    let (a, b) = d_rho_parts(mu, rho, s);
    Ok((a.abs() + b.abs()) / (b - a).abs())
}

/// All invariant fields by the closed-form route.
pub fn closed_forms(inv: &SymmetricInvariants) -> Result<InvariantFieldValues> {
    closed_forms_mu_rho(inv.mu, inv.rho)
}

/// [`closed_forms`] for bare `(μ, ρ)`, including values off the physical
/// region `μ ≥ 3, ρ ≥ 1`.
pub fn closed_forms_mu_rho(mu: f64, rho: f64) -> Result<InvariantFieldValues> {
    Ok(InvariantFieldValues {
        grad_norm_sq: grad_norm_sq_closed(mu, rho)?,
        laplacian: laplacian_closed(mu, rho)?,
        lambda: lambda_closed(mu, rho)?,
        d_rho_sq: d_rho_sq_closed(mu, rho)?,
        nu: nu_checked(mu, rho)?,
    })
}
