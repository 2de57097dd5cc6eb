//! Reproducible random shapes for identity sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields;
use crate::geometry::ShapePoint;

/// Sampling disk radius `|ζ| ≤ 3`.
pub const DISK_RADIUS: f64 = 3.0;

/// Excluded radius around the collision points `ζ = ±1/2` (which include the
/// pole of the cyclic map).
pub const COLLISION_EXCLUSION: f64 = 1e-3;

/// Samples uniformly in the disk `|ζ| ≤ 3` minus small neighborhoods of the
/// collision points.
#[derive(Debug, Clone)]
pub struct ShapeSampler {
    rng: ChaCha8Rng,
    radius: f64,
    exclusion: f64,
}

impl ShapeSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_region(seed, DISK_RADIUS, COLLISION_EXCLUSION)
    }

    pub fn with_region(seed: u64, radius: f64, exclusion: f64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), radius, exclusion }
    }

    pub fn sample(&mut self) -> ShapePoint {
        loop {
            let r = self.radius * self.rng.gen::<f64>().sqrt();
            let phi = self.rng.gen_range(0.0..std::f64::consts::TAU);
            let s = ShapePoint::new(r * phi.cos(), r * phi.sin());
            let (r1, r2) = s.ratios();
            if r1 > self.exclusion && r2 > self.exclusion {
                return s;
            }
        }
    }

    /// Next sample that passes [`is_non_degenerate`].
    pub fn sample_non_degenerate(&mut self) -> ShapePoint {
        loop {
            let s = self.sample();
            if is_non_degenerate(&s) {
                return s;
            }
        }
    }
}

impl Iterator for ShapeSampler {
    type Item = ShapePoint;

    fn next(&mut self) -> Option<ShapePoint> {
        Some(self.sample())
    }
}

/// Minimum distance from a collision point for a non-degenerate shape.
pub const NON_DEGENERATE_COLLISION_DISTANCE: f64 = 0.05;
/// Minimum `|∇μ|²` for a non-degenerate shape.
pub const NON_DEGENERATE_GRAD_NORM_SQ: f64 = 1e-2;
/// Maximum cancellation factor of the `(Dρ)²` closed form.
pub const NON_DEGENERATE_CONDITION: f64 = 1e8;

/// A shape away from collisions and critical points where the `(Dρ)²`
/// closed form does not lose more than about eight digits to cancellation.
pub fn is_non_degenerate(shape: &ShapePoint) -> bool {
    let (r1, r2) = shape.ratios();
    if r1 < NON_DEGENERATE_COLLISION_DISTANCE || r2 < NON_DEGENERATE_COLLISION_DISTANCE {
        return false;
    }
    let Ok(g2) = fields::grad_norm_sq_xy(shape) else {
        return false;
    };
    if g2 < NON_DEGENERATE_GRAD_NORM_SQ {
        return false;
    }
    let Ok(inv) = shape.symmetric_invariants() else {
        return false;
    };
    matches!(fields::d_rho_sq_condition(inv.mu, inv.rho), Ok(k) if k <= NON_DEGENERATE_CONDITION)
}
