//! Dynamics in the reduced variables `(ζ, I, θ)`.

use num_complex::Complex64;

use super::integrator::{integrate, Control, IntegratorConfig};
use super::newton::COLLISION_DISTANCE;
use super::trajectory::{Sample, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::fields::mu_jet;
use crate::geometry::{dot, normalized_positions, reduce_configuration, wedge, PlanarConfig, ShapePoint};

/// Reduced position and its time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub shape: ShapePoint,
    /// `dζ/dt`.
    pub shape_rate: Complex64,
    pub inertia: f64,
    pub inertia_rate: f64,
    pub theta: f64,
    pub theta_rate: f64,
}

impl ReducedState {
    /// `x∧ẋ / (1 + (4/3)|x|²)`, the shape contribution to the rotation.
    fn shape_twist(&self) -> f64 {
        wedge(self.shape.zeta(), self.shape_rate) / self.shape.conformal_factor()
    }

    /// `C = I (θ̇ + (4/3) x∧ẋ/(1 + (4/3)|x|²))`.
    pub fn angular_momentum(&self) -> f64 {
        self.inertia * (self.theta_rate + 4.0 / 3.0 * self.shape_twist())
    }

    /// Kinetic energy split into size, rotation and shape parts.
    pub fn kinetic_energy(&self) -> f64 {
        let i = self.inertia;
        let q = self.shape.conformal_factor();
        let c = self.angular_momentum();
        self.inertia_rate.powi(2) / (8.0 * i) + c * c / (2.0 * i) + 2.0 / 3.0 * i * self.shape_rate.norm_sqr() / (q * q)
    }

    /// `E = K − μ/√I`.
    pub fn energy(&self) -> Result<f64> {
        let mu = self.shape.symmetric_invariants()?.mu;
        Ok(self.kinetic_energy() - mu / self.inertia.sqrt())
    }

    /// `dx/ds = ẋ · 2I/(1 + (4/3)|x|²)`.
    pub fn shape_velocity_s(&self) -> Complex64 {
        self.shape_rate * (2.0 * self.inertia / self.shape.conformal_factor())
    }
}

/// Reduced state of a center-of-mass configuration.
pub fn reduce_state(config: &PlanarConfig) -> Result<ReducedState> {
    let (shape, size) = reduce_configuration(config)?;
    let [q1, q2, q3] = config.positions;
    let [v1, v2, v3] = config.velocities;
    let (q21, v21) = (q2 - q1, v2 - v1);
    let shape_rate = 1.5 * (v3 * q21 - q3 * v21) / (q21 * q21);
    let inertia_rate = 2.0 * (0..3).map(|k| dot(config.positions[k], config.velocities[k])).sum::<f64>();
    Ok(ReducedState {
        shape,
        shape_rate,
        inertia: size.inertia,
        inertia_rate,
        theta: size.theta,
        theta_rate: wedge(q21, v21) / q21.norm_sqr(),
    })
}

/// Positions and velocities of a reduced state.
pub fn reconstruct_state(state: &ReducedState) -> Result<PlanarConfig> {
    if !(state.inertia > 0.0) {
        return Err(Error::NonPositiveInertia(state.inertia));
    }
    let zeta = state.shape.zeta();
    let xi = normalized_positions(zeta);
    let zeta_dot = state.shape_rate;
    let xi_dot = [-zeta_dot / 3.0, -zeta_dot / 3.0, zeta_dot * (2.0 / 3.0)];
    let n = state.shape.mu3();
    let n_dot = 2.0 / 3.0 * dot(zeta, zeta_dot) / n;
    let a = Complex64::from_polar(state.inertia.sqrt() / n, state.theta);
    let a_dot = a * Complex64::new(state.inertia_rate / (2.0 * state.inertia) - n_dot / n, state.theta_rate);
    Ok(PlanarConfig {
        positions: xi.map(|x| a * x),
        velocities: std::array::from_fn(|k| a_dot * xi[k] + a * xi_dot[k]),
    })
}

/// Initial data of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedInitialData {
    pub shape: ShapePoint,
    /// `dx/ds`.
    pub shape_velocity_s: Complex64,
    pub inertia: f64,
    pub inertia_rate: f64,
    pub theta: f64,
    pub energy: f64,
    pub angular_momentum: f64,
}

impl ReducedInitialData {
    pub fn from_config(config: &PlanarConfig) -> Result<Self> {
        let state = reduce_state(config)?;
        Ok(Self {
            shape: state.shape,
            shape_velocity_s: state.shape_velocity_s(),
            inertia: state.inertia,
            inertia_rate: state.inertia_rate,
            theta: state.theta,
            energy: state.energy()?,
            angular_momentum: state.angular_momentum(),
        })
    }

    /// The full reduced state; `θ̇` comes from the angular momentum.
    pub fn state(&self) -> ReducedState {
        let shape_rate = self.shape_velocity_s * (self.shape.conformal_factor() / (2.0 * self.inertia));
        let mut state = ReducedState {
            shape: self.shape,
            shape_rate,
            inertia: self.inertia,
            inertia_rate: self.inertia_rate,
            theta: self.theta,
            theta_rate: 0.0,
        };
        state.theta_rate = self.angular_momentum / self.inertia - 4.0 / 3.0 * state.shape_twist();
        state
    }
}

/// Relative energy mismatch tolerated in the initial data.
pub const ENERGY_CONSISTENCY: f64 = 1e-8;

// state vector: [x, y, ẋ, ẏ, I, İ, θ, s]
fn reduced_rhs(y: &[f64; 8], energy: f64, c: f64) -> Result<[f64; 8]> {
    let [x, yy, xd, yd, i, id, _, _] = *y;
    if !(i > 0.0) {
        return Err(Error::NonPositiveInertia(i));
    }
    let shape = ShapePoint::new(x, yy);
    let jet = mu_jet(&shape)?;
    let q = shape.conformal_factor();
    let sqrt_i = i.sqrt();
    let s_dot = q / (2.0 * i);
    let (xs, ys) = (xd / s_dot, yd / s_dot);
    let twist = x * ys - yy * xs;
    let coef = (4.0 * c - 8.0 / 3.0 * twist) / q;
    let xss = coef * ys + 3.0 * sqrt_i * jet.grad[0];
    let yss = -coef * xs + 3.0 * sqrt_i * jet.grad[1];
    let s_ddot = 8.0 / 3.0 * (x * xd + yy * yd) / (2.0 * i) - q * id / (2.0 * i * i);
    Ok([
        xd,
        yd,
        s_ddot * xs + s_dot * s_dot * xss,
        s_ddot * ys + s_dot * s_dot * yss,
        id,
        4.0 * energy + 2.0 * jet.value / sqrt_i,
        c / i - 4.0 / 3.0 * (x * yd - yy * xd) / q,
        s_dot,
    ])
}

fn unpack_state(y: &[f64; 8], c: f64) -> ReducedState {
    let mut state = ReducedState {
        shape: ShapePoint::new(y[0], y[1]),
        shape_rate: Complex64::new(y[2], y[3]),
        inertia: y[4],
        inertia_rate: y[5],
        theta: y[6],
        theta_rate: 0.0,
    };
    state.theta_rate = c / state.inertia - 4.0 / 3.0 * state.shape_twist();
    state
}

/// Mutual distances `[r₁₂, r₂₃, r₃₁]` from size and shape.
fn separations(shape: &ShapePoint, inertia: f64) -> [f64; 3] {
    let (r1, r2) = shape.ratios();
    let r12 = inertia.max(0.0).sqrt() / shape.mu3();
    [r12, r12 * r1, r12 * r2]
}

/// Integrates the reduced system.
///
/// The shape is advanced by its equation of motion in `s`, converted to `t`,
/// the size by `Ï = 4E + 2μ/√I`, the orientation by the angular-momentum
/// relation, and `s` as a quadrature. Each sample is reconstructed to a
/// Cartesian configuration whose energy and angular momentum are recomputed
/// independently.
pub fn integrate_reduced(init: &ReducedInitialData, cfg: &IntegratorConfig) -> Result<Trajectory> {
    if !(init.inertia > 0.0) {
        return Err(Error::NonPositiveInertia(init.inertia));
    }
    let state0 = init.state();
    let e0 = state0.energy()?;
    let mismatch = (e0 - init.energy).abs();
    if mismatch > ENERGY_CONSISTENCY * init.energy.abs().max(1.0) {
        return Err(Error::InconsistentInitialData(format!(
            "energy {} given, {} implied by the initial state",
            init.energy, e0
        )));
    }
    let (energy, c) = (init.energy, init.angular_momentum);
    let y0 = [
        state0.shape.x,
        state0.shape.y,
        state0.shape_rate.re,
        state0.shape_rate.im,
        state0.inertia,
        state0.inertia_rate,
        state0.theta,
        0.0,
    ];
    let mut samples = Vec::with_capacity(cfg.sample_count());
    let mut termination = Termination::Completed;
    integrate(
        |_, y: &[f64; 8]| reduced_rhs(y, energy, c),
        y0,
        cfg,
        |t, y, is_sample| {
            if !(y[4] > 0.0) {
                termination = Termination::Collapse { t };
                return Ok(Control::Stop);
            }
            let state = unpack_state(y, c);
            let r = separations(&state.shape, state.inertia);
            if let Some(k) = (0..3).find(|&k| r[k] < COLLISION_DISTANCE) {
                termination = Termination::Collision { t, pair: [(1, 2), (2, 3), (3, 1)][k] };
                return Ok(Control::Stop);
            }
            if is_sample {
                let mut sample = Sample::from_config(t, reconstruct_state(&state)?)?;
                sample.s = y[7];
                samples.push(sample);
            }
            Ok(Control::Continue)
        },
    )?;
    Trajectory::from_parts(samples, termination)
}
