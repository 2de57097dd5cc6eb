//! The five central configurations: critical points of `μ` on the shape
//! sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{mu_field, mu_jet};
use crate::geometry::ShapePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralKind {
    /// Equilateral triangle, `μ = 3`.
    Lagrange,
    /// Collinear, `μ = 5/√2`.
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralConfiguration {
    pub kind: CentralKind,
    pub shape: ShapePoint,
    pub mu: f64,
}

/// `ζ = ±i√3/2` and `ζ = −3/2, 0, 3/2`.
pub fn central_configurations() -> [CentralConfiguration; 5] {
    let euler_mu = 5.0 / 2f64.sqrt();
    let lagrange = |shape| CentralConfiguration { kind: CentralKind::Lagrange, shape, mu: 3.0 };
    let euler = |x| CentralConfiguration { kind: CentralKind::Euler, shape: ShapePoint::new(x, 0.0), mu: euler_mu };
    [lagrange(ShapePoint::LAGRANGE_UPPER), lagrange(ShapePoint::LAGRANGE_LOWER), euler(-1.5), euler(0.0), euler(1.5)]
}

/// Newton iteration on `∂μ/∂x = 0`.
pub fn refine_critical_point(start: ShapePoint) -> Result<ShapePoint> {
    let mut p = start;
    for _ in 0..100 {
        let jet = mu_jet(&p)?;
        let [gx, gy] = jet.grad;
        if gx.hypot(gy) <= 1e-14 * jet.value {
            return Ok(p);
        }
        let [[a, b], [_, d]] = jet.hess;
        let det = a * d - b * b;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let next = ShapePoint::new(p.x - (d * gx - b * gy) / det, p.y - (a * gy - b * gx) / det);
        if next == p {
            return Ok(p);
        }
        p = next;
    }
    Err(Error::InvalidArgument(format!("no critical point found from ({}, {})", start.x, start.y)))
}

/// `μ` at a central configuration recomputed from its shape.
pub fn central_mu(cc: &CentralConfiguration) -> Result<f64> {
    mu_field(&cc.shape)
}
