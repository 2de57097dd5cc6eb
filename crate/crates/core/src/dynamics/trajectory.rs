//! Sampled trajectories, their export formats and the `s`-time quadrature.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::newton::conserved_quantities;
use crate::error::{Error, Result};
use crate::geometry::{reduce_configuration, PlanarConfig, ShapePoint};

/// One output sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// Reparametrized time with `ds/dt = (1 + (4/3)|x|²)/(2I)` and `s(t₀) = 0`.
    pub s: f64,
    pub config: PlanarConfig,
    pub shape: ShapePoint,
    pub inertia: f64,
    pub theta: f64,
    pub energy: f64,
    pub angular_momentum: f64,
}

impl Sample {
    /// Fills the reduced and conserved quantities from a configuration; `s`
    /// is left at zero.
    pub fn from_config(t: f64, config: PlanarConfig) -> Result<Self> {
        let (shape, size) = reduce_configuration(&config)?;
        let (energy, angular_momentum) = conserved_quantities(&config)?;
        Ok(Self { t, s: 0.0, config, shape, inertia: size.inertia, theta: size.theta, energy, angular_momentum })
    }

    /// `ds/dt` at this sample.
    pub fn s_rate(&self) -> f64 {
        self.shape.conformal_factor() / (2.0 * self.inertia)
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// Two bodies (one-based labels) came closer than the collision threshold.
    Collision {
        t: f64,
        pair: (usize, usize),
    },
    /// The moment of inertia reached zero.
    Collapse {
        t: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
}

pub const CSV_HEADER: &str = "t,s,q1x,q1y,q2x,q2y,q3x,q3y,x,y,I,theta,E,C";

impl Trajectory {
    /// Builds a trajectory and fills `s` by quadrature.
    pub fn new(samples: Vec<Sample>, termination: Termination) -> Result<Self> {
        let mut traj = Self::from_parts(samples, termination)?;
        let s = reparametrize_time(&traj)?;
        for (sample, s) in traj.samples.iter_mut().zip(s) {
            sample.s = s;
        }
        Ok(traj)
    }

    /// Builds a trajectory keeping the `s` values already in the samples.
    pub fn from_parts(samples: Vec<Sample>, termination: Termination) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InvalidArgument("sample times must increase strictly".into()));
        }
        Ok(Self { samples, termination })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.termination == Termination::Completed
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    fn relative_drift(&self, f: impl Fn(&Sample) -> f64) -> f64 {
        let v0 = f(&self.samples[0]);
        let scale = v0.abs().max(1.0);
        self.samples.iter().map(|s| (f(s) - v0).abs() / scale).fold(0.0, f64::max)
    }

    /// `max |E(t) − E(t₀)| / max(1, |E(t₀)|)`.
    pub fn energy_drift(&self) -> f64 {
        self.relative_drift(|s| s.energy)
    }

    /// `max |C(t) − C(t₀)| / max(1, |C(t₀)|)`.
    pub fn angular_momentum_drift(&self) -> f64 {
        self.relative_drift(|s| s.angular_momentum)
    }

    pub fn min_separation(&self) -> f64 {
        self.samples.iter().map(|s| s.config.min_separation()).fold(f64::INFINITY, f64::min)
    }

    fn row(s: &Sample) -> [f64; 14] {
        let [q1, q2, q3] = s.config.positions;
        [
            s.t,
            s.s,
            q1.re,
            q1.im,
            q2.re,
            q2.im,
            q3.re,
            q3.im,
            s.shape.x,
            s.shape.y,
            s.inertia,
            s.theta,
            s.energy,
            s.angular_momentum,
        ]
    }

    /// One header line and one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for s in &self.samples {
            let row = Self::row(s).map(|v| format!("{v:?}"));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// An object with one array per CSV column plus the termination record.
    pub fn to_json(&self) -> serde_json::Value {
        let mut columns = serde_json::Map::new();
        for (k, name) in CSV_HEADER.split(',').enumerate() {
            let col: Vec<f64> = self.samples.iter().map(|s| Self::row(s)[k]).collect();
            columns.insert(name.to_string(), json!(col));
        }
        columns.insert("termination".into(), json!(self.termination));
        serde_json::Value::Object(columns)
    }
}

/// Cumulative integral of sampled values.
///
/// Uniform grids with at least four points use a fourth-order rule; anything
/// else falls back to the trapezoid rule.
pub fn cumulative_integral(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    let uniform = t.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    for i in 0..n - 1 {
        let piece = if uniform && n >= 4 {
            if i == 0 {
                (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) * h / 24.0
            } else if i == n - 2 {
                (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) * h / 24.0
            } else {
                (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) * h / 24.0
            }
        } else {
            0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i])
        };
        out[i + 1] = out[i] + piece;
    }
    out
}

/// `s(t) = ∫ (1 + (4/3)|x|²)/(2I) dt` at every sample, starting from zero.
pub fn reparametrize_time(traj: &Trajectory) -> Result<Vec<f64>> {
    if let Some(bad) = traj.samples.iter().find(|s| !(s.inertia > 0.0)) {
        return Err(Error::NonPositiveInertia(bad.inertia));
    }
    let t = traj.times();
    let rate: Vec<f64> = traj.samples.iter().map(Sample::s_rate).collect();
    Ok(cumulative_integral(&t, &rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reconstruct_configuration, SizeOrientation};
    use approx::assert_relative_eq;

    fn frozen(shape: ShapePoint, times: &[f64]) -> Trajectory {
        let config = reconstruct_configuration(&shape, &SizeOrientation { inertia: 1.0, theta: 0.0 }).unwrap();
        let samples = times.iter().map(|&t| Sample::from_config(t, config).unwrap()).collect();
        Trajectory::new(samples, Termination::Completed).unwrap()
    }

    #[test]
    fn s_is_half_t_for_collinear_unit_size() {
        let times: Vec<f64> = (0..11).map(|k| 0.1 * k as f64).collect();
        let traj = frozen(ShapePoint::new(0.0, 0.0), &times);
        for s in &traj.samples {
            assert_relative_eq!(s.s, s.t / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn s_equals_t_at_lagrange_shape() {
        let times = [0.0, 0.3, 0.5, 1.2];
        let traj = frozen(ShapePoint::LAGRANGE_UPPER, &times);
        for s in &traj.samples {
            assert_relative_eq!(s.s, s.t, epsilon = 1e-14);
        }
    }

    #[test]
    fn quadrature_orders() {
        let f = |t: f64| (2.0 * t).cos();
        let exact = |t: f64| (2.0 * t).sin() / 2.0;
        let err = |n: usize, uniform: bool| {
            let t: Vec<f64> = (0..=n)
                .map(|k| {
                    let u = k as f64 / n as f64;
                    if uniform {
                        u
                    } else {
                        u + 0.2 * u * (1.0 - u)
                    }
                })
                .collect();
            let v: Vec<f64> = t.iter().map(|&x| f(x)).collect();
            let s = cumulative_integral(&t, &v);
            t.iter().zip(s).map(|(&x, s)| (s - exact(x)).abs()).fold(0.0, f64::max)
        };
        let ratio4 = err(20, true) / err(40, true);
        assert!(ratio4 > 12.0, "uniform ratio {ratio4}");
        let ratio2 = err(20, false) / err(40, false);
        assert!(ratio2 > 3.5 && ratio2 < 4.5, "trapezoid ratio {ratio2}");
    }

    #[test]
    fn non_increasing_times_rejected() {
        let traj = frozen(ShapePoint::new(0.0, 0.0), &[0.0, 1.0]);
        let mut samples = traj.samples.clone();
        samples[1].t = 0.0;
        assert!(Trajectory::from_parts(samples, Termination::Completed).is_err());
    }

    #[test]
    fn non_positive_inertia_rejected() {
        let mut traj = frozen(ShapePoint::new(0.0, 0.0), &[0.0, 1.0]);
        traj.samples[1].inertia = 0.0;
        assert!(matches!(reparametrize_time(&traj), Err(Error::NonPositiveInertia(_))));
    }

    #[test]
    fn csv_and_json_exports() {
        let traj = frozen(ShapePoint::LAGRANGE_UPPER, &[0.0, 0.5]);
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row.len(), 14);
        assert_eq!(row[0], 0.5);
        assert_eq!(row[10], traj.samples[1].inertia);
        let js = traj.to_json();
        assert_eq!(js["theta"].as_array().unwrap().len(), 2);
        assert_eq!(js["termination"]["kind"], "completed");
    }
}
