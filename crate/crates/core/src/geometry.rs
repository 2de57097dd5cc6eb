//! Planar configurations, the shape variable `ζ`, and purely algebraic shape
//! quantities.
//!
//! Positions and velocities are complex numbers. The shape variable of a
//! center-of-mass configuration is `ζ = (3/2) q₃ / (q₂ − q₁)`; together with the
//! moment of inertia `I = Σ|q_k|²` and the orientation `θ = arg(q₂ − q₁)` it
//! determines the configuration completely.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Divisors below this magnitude are treated as a collision.
pub const COLLISION_GUARD: f64 = 1e-13;

/// Radius around `ζ = 1/2` inside which the cyclic map is rejected.
pub const MAP_POLE_RADIUS: f64 = 1e-10;

/// Relative tolerance for the center-of-mass check.
const COM_TOLERANCE: f64 = 1e-9;

/// `x ∧ y = x.re·y.im − x.im·y.re`.
#[inline]
pub fn wedge(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// `x · y` for planar vectors stored as complex numbers.
#[inline]
pub fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Unordered body pairs in the order `(1,2)`, `(2,3)`, `(3,1)`, zero-based.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Positions and velocities of three unit masses in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarConfig {
    pub positions: [Complex64; 3],
    pub velocities: [Complex64; 3],
}

impl PlanarConfig {
    /// Builds a configuration and checks that it sits in the center-of-mass
    /// frame with zero total momentum.
    pub fn new(positions: [Complex64; 3], velocities: [Complex64; 3]) -> Result<Self> {
        let config = Self { positions, velocities };
        config.check_center_of_mass()?;
        Ok(config)
    }

    /// A configuration at rest.
    pub fn at_rest(positions: [Complex64; 3]) -> Result<Self> {
        Self::new(positions, [Complex64::new(0.0, 0.0); 3])
    }

    /// Shifts positions and velocities into the center-of-mass frame.
    pub fn centered(positions: [Complex64; 3], velocities: [Complex64; 3]) -> Self {
        let cq = (positions[0] + positions[1] + positions[2]) / 3.0;
        let cv = (velocities[0] + velocities[1] + velocities[2]) / 3.0;
        Self { positions: positions.map(|q| q - cq), velocities: velocities.map(|v| v - cv) }
    }

    pub fn center_of_mass(&self) -> Complex64 {
        (self.positions[0] + self.positions[1] + self.positions[2]) / 3.0
    }

    pub fn total_momentum(&self) -> Complex64 {
        self.velocities[0] + self.velocities[1] + self.velocities[2]
    }

    fn check_center_of_mass(&self) -> Result<()> {
        let scale = self.positions.iter().map(|q| q.norm()).fold(1.0_f64, f64::max);
        let offset = self.center_of_mass().norm();
        if offset > COM_TOLERANCE * scale {
            return Err(Error::NotCenterOfMass(offset));
        }
        let vscale = self.velocities.iter().map(|v| v.norm()).fold(1.0_f64, f64::max);
        let drift = self.total_momentum().norm();
        if drift > COM_TOLERANCE * vscale {
            return Err(Error::NotCenterOfMass(drift));
        }
        Ok(())
    }

    /// Mutual distances `[r₁₂, r₂₃, r₃₁]`.
    pub fn mutual_distances(&self) -> [f64; 3] {
        PAIRS.map(|(i, j)| (self.positions[i] - self.positions[j]).norm())
    }

    pub fn min_separation(&self) -> f64 {
        self.mutual_distances().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Returns the first colliding pair (one-based labels) if any separation is
    /// below `threshold`.
    pub fn colliding_pair(&self, threshold: f64) -> Option<(usize, usize)> {
        PAIRS.iter().zip(self.mutual_distances()).find(|(_, r)| *r < threshold).map(|(&(i, j), _)| (i + 1, j + 1))
    }

    /// `I = Σ|q_k|²`, which equals `(1/3) Σ r_ij²` in the center-of-mass frame.
    pub fn moment_of_inertia(&self) -> f64 {
        self.positions.iter().map(|q| q.norm_sqr()).sum()
    }

    /// `U = Σ 1/r_ij`.
    pub fn potential(&self) -> Result<f64> {
        if let Some((i, j)) = self.colliding_pair(COLLISION_GUARD) {
            return Err(Error::Collision(i, j));
        }
        Ok(self.mutual_distances().iter().map(|r| 1.0 / r).sum())
    }

    /// Configurational measure `μ = √I · U`.
    pub fn configurational_measure(&self) -> Result<f64> {
        Ok(self.moment_of_inertia().sqrt() * self.potential()?)
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.velocities.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// `q → λ e^{iφ} q`, `v → λ^{-1/2} e^{iφ} v`: the scaling that maps
    /// solutions to solutions when time is rescaled by `λ^{3/2}`.
    pub fn scaled_rotated(&self, lambda: f64, phi: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phi);
        Self {
            positions: self.positions.map(|q| q * rot * lambda),
            velocities: self.velocities.map(|v| v * rot / lambda.sqrt()),
        }
    }

    /// Same positions with velocities negated.
    pub fn time_reversed(&self) -> Self {
        Self { positions: self.positions, velocities: self.velocities.map(|v| -v) }
    }
}

/// Size and orientation of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeOrientation {
    /// Moment of inertia `I`.
    pub inertia: f64,
    /// Orientation `θ = arg(q₂ − q₁) ∈ (−π, π]`.
    pub theta: f64,
}

/// A point `ζ = x + iy` of the shape plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapePoint {
    pub x: f64,
    pub y: f64,
}

/// `μ_k = √I / r_ij` for `(i, j, k)` cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuParts {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

/// Elementary symmetric functions of `(μ₁, μ₂, μ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricInvariants {
    pub mu: f64,
    pub nu: f64,
    pub rho: f64,
}

impl ShapePoint {
    pub const LAGRANGE_UPPER: ShapePoint = ShapePoint { x: 0.0, y: 0.866_025_403_784_438_6 };
    pub const LAGRANGE_LOWER: ShapePoint = ShapePoint { x: 0.0, y: -0.866_025_403_784_438_6 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    pub fn zeta(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Conformal factor `1 + (4/3)|ζ|²`.
    pub fn conformal_factor(&self) -> f64 {
        1.0 + 4.0 / 3.0 * self.norm_sqr()
    }

    /// `(r₁, r₂) = (|ζ − 1/2|, |ζ + 1/2|) = (r₂₃/r₁₂, r₃₁/r₁₂)`.
    pub fn ratios(&self) -> (f64, f64) {
        ((self.x - 0.5).hypot(self.y), (self.x + 0.5).hypot(self.y))
    }

    /// `μ₃ = √(1/2 + (2/3)|ζ|²)`.
    pub fn mu3(&self) -> f64 {
        (0.5 + 2.0 / 3.0 * self.norm_sqr()).sqrt()
    }

    /// `μ₃ = √((1 + r₁² + r₂²)/3)`, the same quantity through the ratios.
    pub fn mu3_from_ratios(&self) -> f64 {
        let (r1, r2) = self.ratios();
        ((1.0 + r1 * r1 + r2 * r2) / 3.0).sqrt()
    }

    /// Fails with the colliding pair when `r₁` or `r₂` vanishes.
    pub fn check_collision(&self) -> Result<(f64, f64)> {
        let (r1, r2) = self.ratios();
        if r1 < COLLISION_GUARD {
            return Err(Error::Collision(2, 3));
        }
        if r2 < COLLISION_GUARD {
            return Err(Error::Collision(3, 1));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::ShapeSingular);
        }
        Ok((r1, r2))
    }

    pub fn mu_parts(&self) -> Result<MuParts> {
        let (r1, r2) = self.check_collision()?;
        let mu3 = self.mu3();
        Ok(MuParts { mu1: mu3 / r1, mu2: mu3 / r2, mu3 })
    }

    pub fn symmetric_invariants(&self) -> Result<SymmetricInvariants> {
        Ok(self.mu_parts()?.symmetric_invariants())
    }

    /// Image under the cyclic relabelling `q₁ → q₂ → q₃ → q₁`:
    /// `ζ' = (1/2)(3/2 + ζ)/(1/2 − ζ)`.
    pub fn cyclic_image(&self) -> Result<ShapePoint> {
        let z = self.zeta();
        let d = Complex64::new(0.5, 0.0) - z;
        if d.norm() < MAP_POLE_RADIUS {
            return Err(Error::MapPole(MAP_POLE_RADIUS));
        }
        Ok(Self::from_complex(0.5 * (Complex64::new(1.5, 0.0) + z) / d))
    }

    /// Pushes a shape velocity `dζ` forward through the cyclic map, whose
    /// derivative is `1/(1/2 − ζ)²`.
    pub fn cyclic_pushforward(&self, dzeta: Complex64) -> Result<(ShapePoint, Complex64)> {
        let image = self.cyclic_image()?;
        let d = Complex64::new(0.5, 0.0) - self.zeta();
        Ok((image, dzeta / (d * d)))
    }

    /// Image under the exchange `q₁ ↔ q₂`: `ζ → −ζ`.
    pub fn reflected(&self) -> ShapePoint {
        ShapePoint { x: -self.x, y: -self.y }
    }

    /// Squared speed in the shape-sphere metric,
    /// `(4/3)|dζ|² / (1 + (4/3)|ζ|²)²`.
    pub fn metric_speed(&self, dzeta: Complex64) -> f64 {
        let q = self.conformal_factor();
        4.0 / 3.0 * dzeta.norm_sqr() / (q * q)
    }

    /// `2(r₁² + r₂²) − (r₁² − r₂²)² − 1`, which equals `4y²` and so
    /// vanishes exactly on collinear shapes.
    pub fn collinearity_indicator(&self) -> f64 {
        let (r1, r2) = self.ratios();
        let (s1, s2) = (r1 * r1, r2 * r2);
        2.0 * (s1 + s2) - (s1 - s2).powi(2) - 1.0
    }
}

impl MuParts {
    pub fn symmetric_invariants(&self) -> SymmetricInvariants {
        let MuParts { mu1, mu2, mu3 } = *self;
        SymmetricInvariants { mu: mu1 + mu2 + mu3, nu: mu1 * mu2 + mu2 * mu3 + mu3 * mu1, rho: mu1 * mu2 * mu3 }
    }

    /// `1/μ₁² + 1/μ₂² + 1/μ₃² − 3`.
    pub fn constraint_residual(&self) -> f64 {
        1.0 / (self.mu1 * self.mu1) + 1.0 / (self.mu2 * self.mu2) + 1.0 / (self.mu3 * self.mu3) - 3.0
    }
}

impl SymmetricInvariants {
    /// `(ν² − 2μρ − 3ρ²) / ν²`.
    pub fn identity_residual(&self) -> f64 {
        (self.nu * self.nu - (2.0 * self.mu * self.rho + 3.0 * self.rho * self.rho)) / (self.nu * self.nu)
    }

    /// `ν` recovered from `(μ, ρ)`: `√(2μρ + 3ρ²)`.
    pub fn nu_from_mu_rho(mu: f64, rho: f64) -> f64 {
        (2.0 * mu * rho + 3.0 * rho * rho).sqrt()
    }
}

/// `ξ_k = q_k/(q₂ − q₁)` as functions of `ζ`.
pub fn normalized_positions(zeta: Complex64) -> [Complex64; 3] {
    [Complex64::new(-0.5, 0.0) - zeta / 3.0, Complex64::new(0.5, 0.0) - zeta / 3.0, zeta * (2.0 / 3.0)]
}

/// Maps a center-of-mass configuration to its shape, size and orientation.
pub fn reduce_configuration(config: &PlanarConfig) -> Result<(ShapePoint, SizeOrientation)> {
    let inertia = config.moment_of_inertia();
    if inertia <= 0.0 {
        return Err(Error::TotalCollapse);
    }
    let [q1, q2, q3] = config.positions;
    let scale = inertia.sqrt();
    let offset = config.center_of_mass().norm();
    if offset > COM_TOLERANCE * scale.max(1.0) {
        return Err(Error::NotCenterOfMass(offset));
    }
    let q21 = q2 - q1;
    if q21.norm() < COLLISION_GUARD * scale.max(1.0) {
        return Err(Error::ShapeSingular);
    }
    let zeta = 1.5 * q3 / q21;
    Ok((ShapePoint::from_complex(zeta), SizeOrientation { inertia, theta: q21.arg() }))
}

/// Inverse of [`reduce_configuration`]; the result is at rest.
pub fn reconstruct_configuration(shape: &ShapePoint, size: &SizeOrientation) -> Result<PlanarConfig> {
    if size.inertia <= 0.0 {
        return Err(Error::NonPositiveInertia(size.inertia));
    }
    let xi = normalized_positions(shape.zeta());
    let norm = shape.mu3();
    let factor = Complex64::from_polar(size.inertia.sqrt() / norm, size.theta);
    Ok(PlanarConfig { positions: xi.map(|x| factor * x), velocities: [Complex64::new(0.0, 0.0); 3] })
}
