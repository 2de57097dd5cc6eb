//! Adaptive explicit Runge–Kutta integration with the Dormand–Prince 8(5,3)
//! pair and a PI step-size controller.
//!
//! Steps are shortened so that every output sample time is hit exactly; no
//! interpolation is involved in producing samples.

use serde::{Deserialize, Serialize};

use super::tableau::{A, B, C, E3, E5, STAGES};
use crate::error::{Error, Result};

/// Tolerances, span and output sampling of an integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub max_step: f64,
    /// Spacing of output samples.
    pub sample_interval: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            t_start: 0.0,
            t_end: 10.0,
            max_step: f64::INFINITY,
            sample_interval: 1e-2,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_span(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_sampling(mut self, interval: f64) -> Self {
        self.sample_interval = interval;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::InvalidArgument("t_end must exceed t_start".into()));
        }
        if !positive(self.sample_interval) {
            return Err(Error::InvalidArgument("sample interval must be positive".into()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidArgument("max_step must be positive".into()));
        }
        Ok(())
    }

    /// Number of output samples including the initial one.
    pub fn sample_count(&self) -> usize {
        let n = ((self.t_end - self.t_start) / self.sample_interval * (1.0 + 1e-12)).floor();
        n as usize + 1
    }

    pub fn sample_time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.sample_interval
    }
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Bookkeeping of a finished integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Time reached; equals `t_end` unless the observer stopped early.
    pub t_final: f64,
    pub stopped: bool,
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 6.0;
/// PI controller gain on the previous error.
const BETA: f64 = 0.04;
/// The error estimate behaves like h⁸.
const ERROR_EXPONENT: f64 = 1.0 / 8.0 - 0.2 * BETA;

fn error_norm<const N: usize>(
    k: &[[f64; N]; STAGES],
    h: f64,
    y: &[f64; N],
    y_new: &[f64; N],
    cfg: &IntegratorConfig,
) -> f64 {
    let mut e5 = 0.0;
    let mut e3 = 0.0;
    for i in 0..N {
        let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
        let (mut a, mut b) = (0.0, 0.0);
        for s in 0..STAGES {
            a += E5[s] * k[s][i];
            b += E3[s] * k[s][i];
        }
        e5 += (a / scale).powi(2);
        e3 += (b / scale).powi(2);
    }
    if e5 == 0.0 && e3 == 0.0 {
        return 0.0;
    }
    h.abs() * e5 / ((e5 + 0.01 * e3) * N as f64).sqrt()
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    rhs: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    cfg: &IntegratorConfig,
) -> Result<f64>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let scale = y0.map(|y| cfg.abs_tol + cfg.rel_tol * y.abs());
    let d0 = rms_norm(y0, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = *y0;
    for i in 0..N {
        y1[i] += h0 * f0[i];
    }
    let f1 = rhs(t0 + h0, &y1)?;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms_norm(&diff, &scale) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(1.0 / 8.0) };
    Ok((100.0 * h0).min(h1).min(cfg.max_step))
}

/// Integrates `dy/dt = rhs(t, y)` over the configured span.
///
/// `observe(t, y, is_sample)` runs after the initial point and after every
/// accepted step; `is_sample` marks the output grid. Returning
/// [`Control::Stop`] ends the integration without error.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    y0: [f64; N],
    cfg: &IntegratorConfig,
    mut observe: O,
) -> Result<IntegrationStats>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(f64, &[f64; N], bool) -> Result<Control>,
{
    cfg.validate()?;
    let mut t = cfg.t_start;
    let mut y = y0;
    let mut stats = IntegrationStats { accepted: 0, rejected: 0, evaluations: 1, t_final: t, stopped: false };
    if observe(t, &y, true)? == Control::Stop {
        stats.stopped = true;
        return Ok(stats);
    }
    let n_samples = cfg.sample_count();
    let mut next_sample = 1;
    let mut f = rhs(t, &y)?;
    let mut h = initial_step(&mut rhs, t, &y, &f, cfg)?;
    stats.evaluations += 1;
    let mut err_prev: f64 = 1e-4;
    let mut k = [[0.0; N]; STAGES];

    while next_sample < n_samples {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::TooManySteps(cfg.max_steps));
        }
        let target = cfg.sample_time(next_sample);
        let remaining = target - t;
        let mut h_try = h.min(cfg.max_step);
        let landing = h_try >= remaining * (1.0 - 1e-12);
        if landing {
            h_try = remaining;
        }
        let min_step = 10.0 * (f64::EPSILON * t.abs()).max(f64::MIN_POSITIVE);
        if h_try < min_step {
            return Err(Error::StepSizeUnderflow { t, h: h_try });
        }

        k[0] = f;
        // a stage leaving the domain of the right-hand side counts as a rejection
        let mut stages_ok = true;
        for s in 1..STAGES {
            let mut ys = y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                ys[i] += h_try * acc;
            }
            stats.evaluations += 1;
            match rhs(t + C[s] * h_try, &ys) {
                Ok(ks) => k[s] = ks,
                Err(_) => {
                    stages_ok = false;
                    break;
                }
            }
        }
        let mut y_new = y;
        let err = if stages_ok {
            for i in 0..N {
                let mut acc = 0.0;
                for (s, ks) in k.iter().enumerate() {
                    acc += B[s] * ks[i];
                }
                y_new[i] += h_try * acc;
            }
            error_norm(&k, h_try, &y, &y_new, cfg)
        } else {
            f64::INFINITY
        };

        if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-ERROR_EXPONENT) * err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            err_prev = err.max(1e-4);
            t = if landing { target } else { t + h_try };
            y = y_new;
            stats.accepted += 1;
            stats.t_final = t;
            // a landing step may be much shorter than the controller's choice
            h = if landing { h.max(h_try * factor) } else { h_try * factor };
            if landing {
                next_sample += 1;
            }
            if observe(t, &y, landing)? == Control::Stop {
                stats.stopped = true;
                return Ok(stats);
            }
            f = rhs(t, &y)?;
            stats.evaluations += 1;
        } else {
            stats.rejected += 1;
            let factor =
                if err.is_finite() { (SAFETY * err.powf(-ERROR_EXPONENT)).clamp(MIN_FACTOR, 1.0) } else { MIN_FACTOR };
            h = h_try * factor;
        }
    }
    Ok(stats)
}
