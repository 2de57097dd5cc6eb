//! Expansion of the necessary condition at `ρ = 0` and the sign obstruction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::necessary::{check_mu, energy_rhs, required_sqrt_i_mu_rho};
use crate::error::{Error, Result};

/// Coefficients of `√I = a₀ + a½ √ρ + a₁ ρ + O(ρ^{3/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub a0: f64,
    pub a_half: f64,
    pub a1: f64,
}

impl SeriesCoefficients {
    pub fn as_array(&self) -> [f64; 3] {
        [self.a0, self.a_half, self.a1]
    }

    /// Largest componentwise relative deviation from `exact`.
    pub fn max_relative_error(&self, exact: &SeriesCoefficients) -> f64 {
        self.as_array().iter().zip(exact.as_array()).map(|(a, e)| (a - e).abs() / e.abs()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, rho: f64) -> f64 {
        self.a0 + self.a_half * rho.sqrt() + self.a1 * rho
    }
}

fn root_two_mu_sq_minus_one(mu: f64) -> Result<f64> {
    let d = 2.0 * mu * mu - 1.0;
    if !(d > 0.0) {
        return Err(Error::OutsideDomain(d));
    }
    Ok(d.sqrt())
}

/// The closed forms of `a₀`, `a½`, `a₁`.
pub fn series_coefficients(mu0: f64, c: f64) -> Result<SeriesCoefficients> {
    let s = root_two_mu_sq_minus_one(mu0)?;
    let m = mu0;
    let m2 = m * m;
    let d = 2.0 * m2 - 1.0;
    Ok(SeriesCoefficients {
        a0: 2.0 * (1.0 - m2 + c * s) / (m * (1.0 - 2.0 * m2)),
        a_half: 3.0 * 2f64.sqrt() * ((m2 - 2.0) * s - 2.0 * c * d) / (d * d * (m * d).sqrt()),
        a1: 3.0 * ((m2 - 2.0) * (1.0 + 6.0 * m2) - 2.0 * c * (1.0 + 7.0 * m2) * s) / (m2 * d.powi(3)),
    })
}

/// The two angular-momentum branches singled out at order `√ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `C = −1/√(2μ² − 1)`.
    One,
    /// `C = (μ² − 2)/(2√(2μ² − 1))`, where `a½` vanishes.
    Two,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::One, Branch::Two];

    pub fn c(&self, mu0: f64) -> Result<f64> {
        let (c1, c2) = branch_c_values(mu0)?;
        Ok(match self {
            Branch::One => c1,
            Branch::Two => c2,
        })
    }
}

/// `(C₁, C₂) = (−1/√(2μ² − 1), (μ² − 2)/(2√(2μ² − 1)))`.
pub fn branch_c_values(mu0: f64) -> Result<(f64, f64)> {
    check_mu(mu0)?;
    let s = root_two_mu_sq_minus_one(mu0)?;
    Ok((-1.0 / s, (mu0 * mu0 - 2.0) / (2.0 * s)))
}

/// Closed form of the order-`√ρ` coefficient of the energy condition,
///
/// ```text
/// −3μ^{5/2} (1 + C√(2μ²−1))² ((μ² − 2) − 2C√(2μ²−1)) / (4√2 (μ² − 1 − C√(2μ²−1))³)
/// ```
pub fn sqrt_rho_coefficient(mu0: f64, c: f64) -> Result<f64> {
    let s = root_two_mu_sq_minus_one(mu0)?;
    let m = mu0;
    let cs = c * s;
    Ok(-3.0 * m.powf(2.5) * (1.0 + cs).powi(2) * ((m * m - 2.0) - 2.0 * cs)
        / (4.0 * 2f64.sqrt() * (m * m - 1.0 - cs).powi(3)))
}

/// Order-`ρ` coefficient of the energy condition on a branch:
/// `−9μ(μ² − 2)/(16(2μ² − 1))` on branch one, `3μ(μ² − 2)/(4(2μ² − 1))` on
/// branch two.
pub fn order_rho_obstruction(mu0: f64, branch: Branch) -> Result<f64> {
    check_mu(mu0)?;
    let m = mu0;
    let ratio = m * (m * m - 2.0) / (2.0 * m * m - 1.0);
    Ok(match branch {
        Branch::One => -9.0 * ratio / 16.0,
        Branch::Two => 3.0 * ratio / 4.0,
    })
}

/// `√I` expansion on a branch.
pub fn branch_expansion(mu0: f64, branch: Branch) -> Result<SeriesCoefficients> {
    series_coefficients(mu0, branch.c(mu0)?)
}

/// Fitting window in `ρ` at `μ₀ = 3`; it widens in proportion to `μ₀` above that.
pub const FIT_WINDOW: (f64, f64) = (1e-5, 1e-2);
pub const FIT_NODES: usize = 50;
/// Powers `ρ^{k/2}` for `k < FIT_TERMS`; the terms beyond `ρ` absorb truncation.
pub const FIT_TERMS: usize = 9;

/// [`FIT_WINDOW`] scaled by `μ₀/3`. The expansion coefficients shrink with
/// `μ₀` while rounding noise in `√I` does not, so a fixed window loses
/// relative accuracy at large `μ₀`.
pub fn fit_window(mu0: f64) -> (f64, f64) {
    let k = (mu0 / 3.0).max(1.0);
    (FIT_WINDOW.0 * k, FIT_WINDOW.1 * k)
}

/// Least-squares coefficients of `f(ρ) ≈ Σ_k c_k ρ^{k/2}` on log-spaced
/// nodes of `window`.
pub fn fit_sqrt_rho_series(f: impl Fn(f64) -> Result<f64>, window: (f64, f64), terms: usize) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    let (llo, lhi) = (lo.log10(), hi.log10());
    let nodes: Vec<f64> =
        (0..FIT_NODES).map(|i| 10f64.powf(llo + (lhi - llo) * i as f64 / (FIT_NODES - 1) as f64)).collect();
    let mut a = DMatrix::<f64>::zeros(FIT_NODES, terms);
    let mut b = DVector::<f64>::zeros(FIT_NODES);
    for (i, &r) in nodes.iter().enumerate() {
        let t = r.sqrt();
        for k in 0..terms {
            a[(i, k)] = t.powi(k as i32);
        }
        b[i] = f(r)?;
    }
    // column scaling keeps the basis well conditioned
    let scale: Vec<f64> = (0..terms).map(|k| a.column(k).amax()).collect();
    for (k, s) in scale.iter().enumerate() {
        a.column_mut(k).scale_mut(1.0 / s);
    }
    let coef = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::FitFailed(e.to_string()))?;
    Ok(coef.iter().zip(&scale).map(|(c, s)| c / s).collect())
}

/// `a₀, a½, a₁` fitted from the invariant form of the necessary condition.
pub fn fitted_series_coefficients(mu0: f64, c: f64) -> Result<SeriesCoefficients> {
    let coef = fit_sqrt_rho_series(|r| required_sqrt_i_mu_rho(mu0, r, c), fit_window(mu0), FIT_TERMS)?;
    Ok(SeriesCoefficients { a0: coef[0], a_half: coef[1], a1: coef[2] })
}

/// Fitted coefficients of `ρ⁰`, `√ρ`, `ρ` in the energy condition.
pub fn fitted_energy_coefficients(mu0: f64, c: f64) -> Result<[f64; 3]> {
    let coef = fit_sqrt_rho_series(|r| energy_rhs(r, mu0, c), fit_window(mu0), FIT_TERMS)?;
    Ok([coef[0], coef[1], coef[2]])
}

/// Roots in `C` of the order-`√ρ` coefficient inside `[lo, hi]`.
///
/// Sign changes are bisected; the double root is located as a zero of the
/// derivative where `|f|` has a local minimum close to zero.
pub fn scan_sqrt_rho_roots(mu0: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_mu(mu0)?;
    if !(hi > lo) || n < 3 {
        return Err(Error::InvalidArgument("scan needs hi > lo and at least 3 points".into()));
    }
    let f = |c: f64| sqrt_rho_coefficient(mu0, c);
    let df = |c: f64| -> Result<f64> {
        let h = 1e-6 * c.abs().max(1.0);
        Ok((f(c + h)? - f(c - h)?) / (2.0 * h))
    };
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&c| f(c)).collect::<Result<_>>()?;
    let mut typical: Vec<f64> = values.iter().map(|v| v.abs()).filter(|v| v.is_finite()).collect();
    typical.sort_by(f64::total_cmp);
    let scale = typical.get(typical.len() / 2).copied().unwrap_or(1.0).max(1e-300);
    let accept = |c: f64| -> Result<bool> { Ok(f(c)?.abs() <= 1e-8 * scale) };

    let mut roots = Vec::new();
    for i in 0..n - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            roots.push(grid[i]);
        } else if a.signum() != b.signum() && b != 0.0 {
            let r = bisect(&f, grid[i], grid[i + 1])?;
            if accept(r)? {
                roots.push(r);
            }
        }
    }
    for i in 1..n - 1 {
        let (a, m, b) = (values[i - 1].abs(), values[i].abs(), values[i + 1].abs());
        let same_sign = values[i - 1].signum() == values[i].signum() && values[i].signum() == values[i + 1].signum();
        if m <= a && m <= b && same_sign {
            if let Ok(r) = bisect(&df, grid[i - 1], grid[i + 1]) {
                if accept(r)? {
                    roots.push(r);
                }
            }
        }
    }
    if values[n - 1] == 0.0 {
        roots.push(grid[n - 1]);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidArgument("no sign change".into()));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

pub const VERDICT_HOLDS: &str = "obstruction holds";
pub const VERDICT_FAILS: &str = "obstruction fails";

/// Values of `C` at which the numeric series fit is cross-checked.
pub const FIT_CHECK_C: [f64; 3] = [-1.0, 0.0, 1.0];

/// Per-`μ₀` results of the obstruction check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofEntry {
    pub mu0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub obstruction1: f64,
    pub obstruction2: f64,
    /// Worst relative deviation of fitted `a₀, a½, a₁` from the closed forms
    /// over `C ∈ {−1, 0, 1}`.
    pub series_fit_error: f64,
    /// Worst relative deviation of the fitted order-`ρ` energy coefficient
    /// from the obstruction, over both branches.
    pub obstruction_fit_error: f64,
    /// Largest fitted order-`√ρ` energy coefficient at the two branch roots.
    pub sqrt_rho_fit_residual: f64,
    pub branch1_expansion: SeriesCoefficients,
    pub branch2_expansion: SeriesCoefficients,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub entries: Vec<ProofEntry>,
    pub min_abs_obstruction: f64,
    pub max_series_fit_error: f64,
    pub max_obstruction_fit_error: f64,
    pub verdict: String,
}

impl ProofReport {
    pub fn holds(&self) -> bool {
        self.verdict == VERDICT_HOLDS
    }
}

fn proof_entry(mu0: f64) -> Result<ProofEntry> {
    let (c1, c2) = branch_c_values(mu0)?;
    let obstruction1 = order_rho_obstruction(mu0, Branch::One)?;
    let obstruction2 = order_rho_obstruction(mu0, Branch::Two)?;
    let mut series_fit_error = 0.0_f64;
    for c in FIT_CHECK_C {
        let fitted = fitted_series_coefficients(mu0, c)?;
        series_fit_error = series_fit_error.max(fitted.max_relative_error(&series_coefficients(mu0, c)?));
    }
    let mut obstruction_fit_error = 0.0_f64;
    let mut sqrt_rho_fit_residual = 0.0_f64;
    for (c, o) in [(c1, obstruction1), (c2, obstruction2)] {
        let e = fitted_energy_coefficients(mu0, c)?;
        obstruction_fit_error = obstruction_fit_error.max((e[2] - o).abs() / o.abs());
        sqrt_rho_fit_residual = sqrt_rho_fit_residual.max(e[1].abs());
    }
    let holds = obstruction1 < 0.0 && obstruction2 > 0.0;
    Ok(ProofEntry {
        mu0,
        c1,
        c2,
        obstruction1,
        obstruction2,
        series_fit_error,
        obstruction_fit_error,
        sqrt_rho_fit_residual,
        branch1_expansion: branch_expansion(mu0, Branch::One)?,
        branch2_expansion: branch_expansion(mu0, Branch::Two)?,
        verdict: if holds { VERDICT_HOLDS } else { VERDICT_FAILS }.to_string(),
    })
}

/// [`proof_entry`] over the grid, split across the available cores.
fn proof_entries(mu_grid: &[f64]) -> Result<Vec<ProofEntry>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = mu_grid.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let workers: Vec<_> = mu_grid
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&mu| proof_entry(mu)).collect::<Result<Vec<_>>>()))
            .collect();
        let mut entries = Vec::with_capacity(mu_grid.len());
        for worker in workers {
            entries.extend(worker.join().expect("proof worker panicked")?);
        }
        Ok(entries)
    })
}

/// Checks the sign of both order-`ρ` obstructions at every `μ₀` in the grid.
pub fn verify_no_constant_mu_orbit(mu_grid: &[f64]) -> Result<ProofReport> {
    if mu_grid.is_empty() {
        return Err(Error::InvalidArgument("empty mu grid".into()));
    }
    for &mu in mu_grid {
        check_mu(mu)?;
    }
    let entries = proof_entries(mu_grid)?;
    let min_abs_obstruction =
        entries.iter().flat_map(|e| [e.obstruction1.abs(), e.obstruction2.abs()]).fold(f64::INFINITY, f64::min);
    let max_series_fit_error = entries.iter().map(|e| e.series_fit_error).fold(0.0, f64::max);
    let max_obstruction_fit_error = entries.iter().map(|e| e.obstruction_fit_error).fold(0.0, f64::max);
    let holds = entries.iter().all(|e| e.verdict == VERDICT_HOLDS);
    Ok(ProofReport {
        entries,
        min_abs_obstruction,
        max_series_fit_error,
        max_obstruction_fit_error,
        verdict: if holds { VERDICT_HOLDS } else { VERDICT_FAILS }.to_string(),
    })
}

/// `n` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
