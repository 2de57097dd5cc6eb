//! Newton's equations for three unit masses and the Cartesian reference
//! integrator.

use num_complex::Complex64;

use super::integrator::{integrate, Control, IntegratorConfig};
use super::trajectory::{Sample, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{wedge, PlanarConfig, COLLISION_GUARD, PAIRS};

/// Integrations stop once a mutual distance falls below this.
pub const COLLISION_DISTANCE: f64 = 1e-6;

/// `a_i = Σ_{j≠i} (q_j − q_i)/|q_j − q_i|³`.
pub fn newton_acceleration(config: &PlanarConfig) -> Result<[Complex64; 3]> {
    if let Some((i, j)) = config.colliding_pair(COLLISION_GUARD) {
        return Err(Error::Collision(i, j));
    }
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (i, j) in PAIRS {
        let d = config.positions[j] - config.positions[i];
        let r = d.norm();
        let f = d / (r * r * r);
        acc[i] += f;
        acc[j] -= f;
    }
    Ok(acc)
}

/// Energy `E = K − U` and angular momentum `C = Σ q_k ∧ v_k`.
pub fn conserved_quantities(config: &PlanarConfig) -> Result<(f64, f64)> {
    let energy = config.kinetic_energy() - config.potential()?;
    let angular_momentum = config.positions.iter().zip(&config.velocities).map(|(q, v)| wedge(*q, *v)).sum();
    Ok((energy, angular_momentum))
}

pub(crate) fn pack(config: &PlanarConfig) -> [f64; 12] {
    let mut y = [0.0; 12];
    for k in 0..3 {
        y[2 * k] = config.positions[k].re;
        y[2 * k + 1] = config.positions[k].im;
        y[6 + 2 * k] = config.velocities[k].re;
        y[6 + 2 * k + 1] = config.velocities[k].im;
    }
    y
}

pub(crate) fn unpack(y: &[f64; 12]) -> PlanarConfig {
    let c = |i: usize| Complex64::new(y[i], y[i + 1]);
    PlanarConfig { positions: [c(0), c(2), c(4)], velocities: [c(6), c(8), c(10)] }
}

/// Integrates Newton's equations from `start`.
///
/// Samples land on the grid `t_start + k·Δ`. If two bodies come closer than
/// [`COLLISION_DISTANCE`] the integration stops and the trajectory ends with
/// a [`Termination::Collision`] flag.
pub fn integrate_cartesian(start: &PlanarConfig, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let start = PlanarConfig::new(start.positions, start.velocities)?;
    if let Some((i, j)) = start.colliding_pair(COLLISION_DISTANCE) {
        return Err(Error::Collision(i, j));
    }
    let mut samples = Vec::with_capacity(cfg.sample_count());
    let mut termination = Termination::Completed;
    integrate(
        |_, y: &[f64; 12]| {
            let config = unpack(y);
            let a = newton_acceleration(&config)?;
            let mut dy = [0.0; 12];
            dy[..6].copy_from_slice(&y[6..]);
            for k in 0..3 {
                dy[6 + 2 * k] = a[k].re;
                dy[6 + 2 * k + 1] = a[k].im;
            }
            Ok(dy)
        },
        pack(&start),
        cfg,
        |t, y, is_sample| {
            let config = unpack(y);
            if let Some(pair) = config.colliding_pair(COLLISION_DISTANCE) {
                termination = Termination::Collision { t, pair };
                return Ok(Control::Stop);
            }
            if is_sample {
                samples.push(Sample::from_config(t, config)?);
            }
            Ok(Control::Continue)
        },
    )?;
    Trajectory::new(samples, termination)
}
