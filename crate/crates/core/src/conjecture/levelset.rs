//! Continuation of the level curves `μ(x) = μ₀` in the shape plane.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::necessary::{check_mu, implicit_curve_curvature, CRITICAL_GRADIENT};
use crate::error::{Error, Result};
use crate::fields::{mu_field, mu_jet};
use crate::geometry::ShapePoint;

/// Largest arc-length step.
pub const MAX_STEP: f64 = 1e-3;
/// Steps are also kept below this fraction of the radius of curvature.
pub const CURVATURE_FRACTION: f64 = 0.05;
/// Corrector tolerance on `|μ − μ₀|`.
pub const CORRECTOR_TOL: f64 = 1e-10;
/// Tracing stops when the curve leaves `|ζ| ≤ R_MAX`.
pub const R_MAX: f64 = 10.0;
/// A seed must lie this close to the level.
pub const SEED_TOL: f64 = 1e-6;
const MAX_VERTICES: usize = 5_000_000;

/// `μ` at the Euler points.
pub fn euler_mu() -> f64 {
    5.0 / 2f64.sqrt()
}

/// Where to look for a starting point on a level curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeedHint {
    /// On the imaginary axis above the upper Lagrange point.
    Lagrange,
    /// On the real axis between the Euler point `0` and the collision `1/2`;
    /// needs `μ₀ > 5/√2`.
    Euler,
    /// [`SeedHint::Lagrange`] below the Euler value, [`SeedHint::Euler`] above.
    Auto,
    /// Projected from the given shape along the gradient.
    Near(ShapePoint),
}

impl FromStr for SeedHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lagrange" => Ok(SeedHint::Lagrange),
            "euler" => Ok(SeedHint::Euler),
            "auto" => Ok(SeedHint::Auto),
            _ => {
                let parts: Vec<&str> = s.split(',').collect();
                let bad = || Error::InvalidArgument(format!("seed hint `{s}`: expected lagrange, euler, auto or x,y"));
                if parts.len() != 2 {
                    return Err(bad());
                }
                let x = parts[0].trim().parse().map_err(|_| bad())?;
                let y = parts[1].trim().parse().map_err(|_| bad())?;
                Ok(SeedHint::Near(ShapePoint::new(x, y)))
            }
        }
    }
}

fn bisect_on(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton projection onto `μ = μ₀` along the gradient.
pub fn project_to_level(mu0: f64, start: ShapePoint) -> Result<ShapePoint> {
    let mut p = start;
    for _ in 0..50 {
        let jet = mu_jet(&p)?;
        let d = jet.value - mu0;
        if d.abs() <= CORRECTOR_TOL {
            return Ok(p);
        }
        let g2 = jet.grad_norm_sqr();
        if g2.sqrt() <= CRITICAL_GRADIENT {
            return Err(Error::CriticalPoint);
        }
        p = ShapePoint::new(p.x - d * jet.grad[0] / g2, p.y - d * jet.grad[1] / g2);
    }
    Err(Error::NoSeed(mu0))
}

/// A point on `μ = μ₀`.
pub fn find_seed(mu0: f64, hint: SeedHint) -> Result<ShapePoint> {
    check_mu(mu0)?;
    if mu0 == 3.0 {
        // the level set is the pair of Lagrange points
        return Err(Error::NoSeed(mu0));
    }
    let hint = match hint {
        SeedHint::Auto if mu0 < euler_mu() => SeedHint::Lagrange,
        SeedHint::Auto => SeedHint::Euler,
        other => other,
    };
    let seed = match hint {
        SeedHint::Lagrange => {
            let y0 = ShapePoint::LAGRANGE_UPPER.y;
            let f = |y: f64| Ok(mu_field(&ShapePoint::new(0.0, y))? - mu0);
            let mut hi = 2.0 * y0;
            while f(hi)? < 0.0 {
                hi *= 2.0;
                if hi > 1e12 {
                    return Err(Error::NoSeed(mu0));
                }
            }
            ShapePoint::new(0.0, bisect_on(f, y0, hi)?)
        }
        SeedHint::Euler => {
            if mu0 <= euler_mu() {
                return Err(Error::NoSeed(mu0));
            }
            let f = |x: f64| Ok(mu_field(&ShapePoint::new(x, 0.0))? - mu0);
            let mut hi = 0.25;
            while f(hi)? < 0.0 {
                hi = 0.5 - 0.5 * (0.5 - hi);
                if 0.5 - hi < 1e-14 {
                    return Err(Error::NoSeed(mu0));
                }
            }
            ShapePoint::new(bisect_on(f, 0.0, hi)?, 0.0)
        }
        SeedHint::Near(p) => p,
        SeedHint::Auto => unreachable!("resolved above"),
    };
    project_to_level(mu0, seed).map_err(|e| match e {
        Error::CriticalPoint | Error::NoSeed(_) => Error::NoSeed(mu0),
        other => other,
    })
}

/// A traced level curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub mu0: f64,
    pub points: Vec<ShapePoint>,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_min: f64,
    pub rho_max: f64,
    /// The curve returned to its seed.
    pub closed: bool,
    /// The curve left `|ζ| ≤ R_MAX` (or hit the vertex limit).
    pub truncated: bool,
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_level_error(&self) -> f64 {
        self.mu.iter().map(|m| (m - self.mu0).abs()).fold(0.0, f64::max)
    }

    /// `x,y,mu,rho` rows followed by a `#` footer with the `ρ` range.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,mu,rho")?;
        for ((p, m), r) in self.points.iter().zip(&self.mu).zip(&self.rho) {
            writeln!(out, "{:?},{:?},{:?},{:?}", p.x, p.y, m, r)?;
        }
        writeln!(
            out,
            "# rho_min={:?} rho_max={:?} closed={} truncated={}",
            self.rho_min, self.rho_max, self.closed, self.truncated
        )
    }
}

struct Walk {
    points: Vec<ShapePoint>,
    closed: bool,
    truncated: bool,
}

fn corrector(mu0: f64, mut p: ShapePoint) -> Option<ShapePoint> {
    for _ in 0..20 {
        let jet = mu_jet(&p).ok()?;
        let d = jet.value - mu0;
        if d.abs() <= CORRECTOR_TOL {
            return Some(p);
        }
        let g2 = jet.grad_norm_sqr();
        p = ShapePoint::new(p.x - d * jet.grad[0] / g2, p.y - d * jet.grad[1] / g2);
    }
    None
}

fn walk(mu0: f64, seed: ShapePoint, epsilon: f64) -> Result<Walk> {
    let mut points = vec![seed];
    let mut p = seed;
    let mut arc = 0.0;
    loop {
        if points.len() >= MAX_VERTICES {
            return Ok(Walk { points, closed: false, truncated: true });
        }
        let jet = mu_jet(&p)?;
        let gn = jet.grad_norm_sqr().sqrt();
        if gn <= CRITICAL_GRADIENT {
            return Err(Error::CriticalPoint);
        }
        let tangent = [-epsilon * jet.grad[1] / gn, epsilon * jet.grad[0] / gn];
        let kappa = implicit_curve_curvature(jet.grad, jet.hess, 1.0).abs();
        let mut h = MAX_STEP.min(CURVATURE_FRACTION / kappa);
        let next = loop {
            let guess = ShapePoint::new(p.x + h * tangent[0], p.y + h * tangent[1]);
            match corrector(mu0, guess) {
                Some(q) => break q,
                None => {
                    h *= 0.5;
                    if h < 1e-14 {
                        return Err(Error::InvalidArgument(format!(
                            "level-set continuation stalled at ({}, {})",
                            p.x, p.y
                        )));
                    }
                }
            }
        };
        arc += (next.x - p.x).hypot(next.y - p.y);
        p = next;
        if p.x.hypot(p.y) > R_MAX {
            return Ok(Walk { points, closed: false, truncated: true });
        }
        points.push(p);
        // vertices are about h apart along the curve, so one of them falls
        // within h/2 of the seed when the curve closes
        if arc > 3.0 * h && (p.x - seed.x).hypot(p.y - seed.y) < 0.5 * h {
            return Ok(Walk { points, closed: true, truncated: false });
        }
    }
}

/// Traces `μ = μ₀` from `seed` by tangent prediction and Newton correction.
///
/// Stops when the curve closes or leaves `|ζ| ≤ R_MAX`; in the latter case
/// the curve is also followed backwards from the seed.
pub fn trace_level_set(mu0: f64, seed: ShapePoint) -> Result<LevelSet> {
    check_mu(mu0)?;
    let level = mu_field(&seed)?;
    if (level - mu0).abs() > SEED_TOL {
        return Err(Error::InvalidArgument(format!("seed has mu = {level}, not within {SEED_TOL:e} of {mu0}")));
    }
    let seed = project_to_level(mu0, seed)?;
    let forward = walk(mu0, seed, 1.0)?;
    let (points, closed, truncated) = if forward.truncated {
        let backward = walk(mu0, seed, -1.0)?;
        let mut pts: Vec<ShapePoint> = backward.points.into_iter().skip(1).rev().collect();
        pts.extend(forward.points);
        (pts, false, true)
    } else {
        (forward.points, forward.closed, false)
    };
    let mu: Vec<f64> = points.iter().map(mu_field).collect::<Result<_>>()?;
    let rho: Vec<f64> = points.iter().map(|p| Ok(p.symmetric_invariants()?.rho)).collect::<Result<_>>()?;
    let rho_min = rho.iter().copied().fold(f64::INFINITY, f64::min);
    let rho_max = rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(LevelSet { mu0, points, mu, rho, rho_min, rho_max, closed, truncated })
}
