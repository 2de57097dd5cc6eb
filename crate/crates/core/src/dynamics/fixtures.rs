//! Named initial conditions and a seeded generator of generic starts.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integrator::IntegratorConfig;
use super::newton::{conserved_quantities, integrate_cartesian};
use crate::error::{Error, Result};
use crate::geometry::PlanarConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// Unit-side equilateral triangle rotating rigidly at `ω = √3`.
    LagrangeCircular,
    /// Bodies at `−1/2, 1/2, 0` on a line rotating rigidly at `ω = √10`.
    EulerCollinearCircular,
    /// Unit-side equilateral triangle released from rest.
    EquilateralFreefall,
    /// [`Fixture::LagrangeCircular`] with `q₃` displaced by `(0.01, 0)` and
    /// then shifted back to the center-of-mass frame.
    GenericPerturbed,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [
        Fixture::LagrangeCircular,
        Fixture::EulerCollinearCircular,
        Fixture::EquilateralFreefall,
        Fixture::GenericPerturbed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::LagrangeCircular => "lagrange_circular",
            Fixture::EulerCollinearCircular => "euler_collinear_circular",
            Fixture::EquilateralFreefall => "equilateral_freefall",
            Fixture::GenericPerturbed => "generic_perturbed",
        }
    }

    pub fn orbit(&self) -> FixtureOrbit {
        let c = Complex64::new;
        let h = 3f64.sqrt() / 6.0;
        let triangle = [c(-0.5, -h), c(0.5, -h), c(0.0, 2.0 * h)];
        let rotate = |q: [Complex64; 3], w: f64| q.map(|p| c(0.0, w) * p);
        let w3 = 3f64.sqrt();
        match self {
            Fixture::LagrangeCircular => FixtureOrbit {
                config: PlanarConfig { positions: triangle, velocities: rotate(triangle, w3) },
                energy: -1.5,
                angular_momentum: w3,
            },
            Fixture::EulerCollinearCircular => {
                let line = [c(-0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)];
                let w = 10f64.sqrt();
                FixtureOrbit {
                    config: PlanarConfig { positions: line, velocities: rotate(line, w) },
                    energy: -2.5,
                    angular_momentum: w / 2.0,
                }
            }
            Fixture::EquilateralFreefall => FixtureOrbit {
                config: PlanarConfig { positions: triangle, velocities: [c(0.0, 0.0); 3] },
                energy: -3.0,
                angular_momentum: 0.0,
            },
            Fixture::GenericPerturbed => {
                let mut q = triangle;
                q[2] += c(0.01, 0.0);
                let config = PlanarConfig::centered(q, rotate(triangle, w3));
                let (energy, angular_momentum) =
                    conserved_quantities(&config).expect("perturbed triangle is collision free");
                FixtureOrbit { config, energy, angular_momentum }
            }
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

/// Initial condition together with its energy and angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureOrbit {
    pub config: PlanarConfig,
    pub energy: f64,
    pub angular_momentum: f64,
}

pub fn fixture_orbit(name: &str) -> Result<FixtureOrbit> {
    Ok(name.parse::<Fixture>()?.orbit())
}

/// A bound, rotating start near the equilateral triangle with random shape,
/// size, orientation and velocity perturbations.
pub fn random_start(rng: &mut impl Rng) -> PlanarConfig {
    let c = Complex64::new;
    let h = 3f64.sqrt() / 6.0;
    let triangle = [c(-0.5, -h), c(0.5, -h), c(0.0, 2.0 * h)];
    let omega = 3f64.sqrt() * rng.gen_range(0.8..1.2);
    let mut jitter = |scale: f64| c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
    let q = triangle.map(|p| p + jitter(0.15));
    let v = q.map(|p| c(0.0, omega) * p + jitter(0.15));
    let lambda = rng.gen_range(0.7..1.4);
    let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    PlanarConfig::centered(q, v).scaled_rotated(lambda, phi)
}

/// `count` random starts whose Cartesian orbits keep every mutual distance
/// above `min_separation` over `[0, span]`.
pub fn random_orbits(seed: u64, count: usize, span: f64, min_separation: f64) -> Result<Vec<PlanarConfig>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = IntegratorConfig::default().with_span(span).with_sampling(span / 200.0).with_tolerances(1e-10, 1e-10);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count.max(1) {
            return Err(Error::InvalidArgument(format!(
                "could not find {count} orbits staying above separation {min_separation}"
            )));
        }
        let start = random_start(&mut rng);
        let traj = integrate_cartesian(&start, &cfg)?;
        if traj.is_complete() && traj.min_separation() >= min_separation {
            out.push(start);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn names_roundtrip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
            assert_eq!(f.to_string(), f.name());
        }
        assert!(matches!(fixture_orbit("figure_eight"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn documented_invariants_match() {
        for f in Fixture::ALL {
            let orbit = f.orbit();
            let config = PlanarConfig::new(orbit.config.positions, orbit.config.velocities).unwrap();
            let (e, c) = conserved_quantities(&config).unwrap();
            assert_relative_eq!(e, orbit.energy, epsilon = 1e-14);
            assert_relative_eq!(c, orbit.angular_momentum, epsilon = 1e-14);
        }
    }

    #[test]
    fn lagrange_values() {
        let o = fixture_orbit("lagrange_circular").unwrap();
        assert_eq!(o.energy, -1.5);
        assert_eq!(o.angular_momentum, 3f64.sqrt());
        let o = fixture_orbit("equilateral_freefall").unwrap();
        assert_eq!((o.energy, o.angular_momentum), (-3.0, 0.0));
    }

    #[test]
    fn perturbed_is_centered_and_displaced() {
        let lag = Fixture::LagrangeCircular.orbit().config;
        let per = Fixture::GenericPerturbed.orbit().config;
        assert!(per.center_of_mass().norm() < 1e-16);
        let d = (per.positions[2] - per.positions[0]) - (lag.positions[2] - lag.positions[0]);
        assert_relative_eq!(d.re, 0.01, epsilon = 1e-15);
        assert!(d.im.abs() < 1e-15);
    }

    #[test]
    fn random_starts_are_reproducible() {
        let a = random_start(&mut ChaCha8Rng::seed_from_u64(9));
        let b = random_start(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(PlanarConfig::new(a.positions, a.velocities).is_ok());
        let (e, _) = conserved_quantities(&a).unwrap();
        assert!(e < 0.0);
    }
}
