//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use saari_core::conjecture::series::{fitted_energy_coefficients, fitted_series_coefficients, log_grid, Branch};
use saari_core::conjecture::sweep::default_c_grid;
use saari_core::conjecture::{
    branch_c_values, central_configurations, classify_trajectory, conjecture_sweep, order_rho_obstruction,
    series_coefficients, verify_no_constant_mu_orbit, CentralKind, Verdict,
};
use saari_core::dynamics::fixtures::random_orbits;
use saari_core::dynamics::{
    fixture_orbit, integrate_cartesian, integrate_reduced, lagrange_jacobi_residual, saari_relation_residual,
    shape_eom_residual, Fixture, IntegratorConfig, ReducedInitialData,
};
use saari_core::fields::{closed_forms, field_values_xy};
use saari_core::sampling::ShapeSampler;
use saari_core::{Complex64, ShapePoint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn within_budget(elapsed: Duration, budget: f64, detail: String) -> Outcome {
    let secs = elapsed.as_secs_f64();
    check(secs < budget, format!("{detail}; {secs:.2}s of {budget}s"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst_identity = 0.0_f64;
    let mut worst_mu3 = 0.0_f64;
    for shape in ShapeSampler::new(1).take(10_000) {
        let inv = shape.symmetric_invariants().map_err(|e| e.to_string())?;
        worst_identity = worst_identity.max(inv.identity_residual());
        worst_mu3 = worst_mu3.max(rel(shape.mu3_from_ratios(), shape.mu3()));
    }
    let ok = worst_identity <= 1e-12 && worst_mu3 <= 1e-12;
    check(ok, format!("nu identity {worst_identity:.1e}, mu3 routes {worst_mu3:.1e}"))
        .and_then(|d| within_budget(start.elapsed(), 1.0, d))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut sampler = ShapeSampler::new(2);
    let mut worst = [0.0_f64; 4];
    for _ in 0..1000 {
        let shape = sampler.sample_non_degenerate();
        let xy = field_values_xy(&shape).map_err(|e| e.to_string())?.as_array();
        let inv = shape.symmetric_invariants().map_err(|e| e.to_string())?;
        let cf = closed_forms(&inv).map_err(|e| e.to_string())?.as_array();
        for k in 0..4 {
            worst[k] = worst[k].max(rel(cf[k], xy[k]));
        }
    }
    let ok = worst.iter().all(|w| *w <= 1e-6);
    check(
        ok,
        format!(
            "max rel |grad mu|^2 {:.1e}, laplacian {:.1e}, lambda {:.1e}, (D rho)^2 {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
    .and_then(|d| within_budget(start.elapsed(), 5.0, d))
}

fn criterion_3() -> Outcome {
    let mut worst_vanishing = 0.0_f64;
    let mut worst_mu = 0.0_f64;
    let mut worst_lap = 0.0_f64;
    for cc in central_configurations() {
        let f = field_values_xy(&cc.shape).map_err(|e| e.to_string())?;
        worst_vanishing = worst_vanishing.max(f.grad_norm_sq.abs()).max(f.lambda.abs()).max(f.d_rho_sq.abs());
        let inv = cc.shape.symmetric_invariants().map_err(|e| e.to_string())?;
        let (mu_exact, lap_exact) = match cc.kind {
            CentralKind::Lagrange => (3.0, 9.0),
            CentralKind::Euler => (5.0 / 2f64.sqrt(), 11.0 * 2f64.sqrt()),
        };
        worst_mu = worst_mu.max((inv.mu - mu_exact).abs());
        worst_lap = worst_lap.max((f.laplacian - lap_exact).abs());
    }
    let ok = worst_vanishing <= 1e-10 && worst_mu <= 1e-12 && worst_lap <= 1e-10;
    check(ok, format!("vanishing fields {worst_vanishing:.1e}, mu {worst_mu:.1e}, laplacian {worst_lap:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut worst_scalar = 0.0_f64;
    let mut worst_fields = 0.0_f64;
    let mut worst_metric = 0.0_f64;
    let tol_rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    for shape in ShapeSampler::new(4).take(2000) {
        let inv = shape.symmetric_invariants().map_err(|e| e.to_string())?;
        for image in [shape.cyclic_image().map_err(|e| e.to_string())?, shape.reflected()] {
            let other = image.symmetric_invariants().map_err(|e| e.to_string())?;
            worst_scalar = worst_scalar.max(tol_rel(other.mu, inv.mu)).max(tol_rel(other.rho, inv.rho));
        }
        let dz = Complex64::new(0.37, -1.1);
        let (image, dz_image) = shape.cyclic_pushforward(dz).map_err(|e| e.to_string())?;
        worst_metric = worst_metric.max(rel(image.metric_speed(dz_image), shape.metric_speed(dz)));
    }
    let mut sampler = ShapeSampler::new(44);
    for _ in 0..1000 {
        let shape = sampler.sample_non_degenerate();
        let base = field_values_xy(&shape).map_err(|e| e.to_string())?.as_array();
        for image in [shape.cyclic_image().map_err(|e| e.to_string())?, shape.reflected()] {
            let f = field_values_xy(&image).map_err(|e| e.to_string())?.as_array();
            for k in 0..5 {
                worst_fields = worst_fields.max(tol_rel(f[k], base[k]));
            }
        }
    }
    let map = |x: f64| ShapePoint::new(x, 0.0).cyclic_image().map(|p| (p.x, p.y));
    let euler_ok = [(0.0, 1.5), (1.5, -1.5), (-1.5, 0.0)].iter().all(|&(from, to)| match map(from) {
        Ok((x, y)) => (x - to).abs() <= 1e-12 && y.abs() <= 1e-12,
        Err(_) => false,
    });
    let lagrange_ok = [ShapePoint::LAGRANGE_UPPER, ShapePoint::LAGRANGE_LOWER]
        .iter()
        .all(|l| l.cyclic_image().map(|p| (p.x - l.x).hypot(p.y - l.y) <= 1e-12).unwrap_or(false));
    let ok = worst_scalar <= 1e-10 && worst_fields <= 1e-10 && worst_metric <= 1e-10 && euler_ok && lagrange_ok;
    check(
        ok,
        format!(
            "mu/rho {worst_scalar:.1e}, fields {worst_fields:.1e}, metric {worst_metric:.1e}, euler cycle {euler_ok}, lagrange fixed {lagrange_ok}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let lag = fixture_orbit("lagrange_circular").map_err(|e| e.to_string())?;
    let cfg = IntegratorConfig::default().with_span(10.0).with_sampling(0.01);
    let traj = integrate_cartesian(&lag.config, &cfg).map_err(|e| e.to_string())?;
    let mut mu_err = 0.0_f64;
    let mut e_err = 0.0_f64;
    let mut c_err = 0.0_f64;
    for s in &traj.samples {
        mu_err = mu_err.max((s.config.configurational_measure().map_err(|e| e.to_string())? - 3.0).abs());
        e_err = e_err.max((s.energy + 1.5).abs());
        c_err = c_err.max((s.angular_momentum - 3f64.sqrt()).abs());
    }
    let lagrange_ok = traj.is_complete() && mu_err <= 1e-8 && e_err <= 1e-9 && c_err <= 1e-9;

    let generic = fixture_orbit("generic_perturbed").map_err(|e| e.to_string())?;
    let residuals = |dt: f64| -> Result<[f64; 3], String> {
        let c = IntegratorConfig::default().with_span(4.0).with_sampling(dt);
        let t = integrate_cartesian(&generic.config, &c).map_err(|e| e.to_string())?;
        Ok([
            lagrange_jacobi_residual(&t).map_err(|e| e.to_string())?.max_abs(),
            saari_relation_residual(&t).map_err(|e| e.to_string())?.max_abs(),
            shape_eom_residual(&t).map_err(|e| e.to_string())?.max_abs(),
        ])
    };
    let ladder = [0.04, 0.02, 0.01].map(residuals);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0_f64;
    for w in ladder.windows(2) {
        let (a, b) = (w[0].clone()?, w[1].clone()?);
        for k in 0..3 {
            let r = a[k] / b[k];
            min_ratio = min_ratio.min(r);
            max_ratio = max_ratio.max(r);
        }
    }
    let fine = residuals(1e-3)?;
    let order_ok = min_ratio >= 3.0 && max_ratio <= 5.0;
    let fine_ok = fine.iter().all(|r| *r <= 1e-4);
    check(
        lagrange_ok && order_ok && fine_ok,
        format!(
            "lagrange |mu-3| {mu_err:.1e} |E+3/2| {e_err:.1e} |C-sqrt3| {c_err:.1e}; refinement ratios {min_ratio:.2}..{max_ratio:.2}; residuals at dt=1e-3 LJ {:.1e} Saari {:.1e} EOM {:.1e}",
            fine[0], fine[1], fine[2]
        ),
    )
    .and_then(|d| within_budget(start.elapsed(), 30.0, d))
}

fn criterion_6() -> Outcome {
    let starts = random_orbits(6, 5, 5.0, 0.05).map_err(|e| e.to_string())?;
    let cfg = IntegratorConfig::default().with_span(5.0).with_sampling(0.01);
    let mut worst = 0.0_f64;
    for start in &starts {
        let cart = integrate_cartesian(start, &cfg).map_err(|e| e.to_string())?;
        let init = ReducedInitialData::from_config(start).map_err(|e| e.to_string())?;
        let red = integrate_reduced(&init, &cfg).map_err(|e| e.to_string())?;
        if cart.len() != red.len() {
            return Err(format!("sample counts differ: {} vs {}", cart.len(), red.len()));
        }
        for (a, b) in cart.samples.iter().zip(&red.samples) {
            for k in 0..3 {
                worst = worst.max((a.config.positions[k] - b.config.positions[k]).norm());
            }
        }
    }
    check(worst <= 1e-6, format!("max position difference {worst:.1e} over 5 starts"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut fit_worst = 0.0_f64;
    for mu in [3.0, 4.0, 10.0] {
        for c in [0.0, 1.0, -1.0] {
            let fitted = fitted_series_coefficients(mu, c).map_err(|e| e.to_string())?;
            let exact = series_coefficients(mu, c).map_err(|e| e.to_string())?;
            fit_worst = fit_worst.max(fitted.max_relative_error(&exact));
        }
    }
    let a0 = fitted_series_coefficients(3.0, 0.0).map_err(|e| e.to_string())?.a0;
    let a0_err = rel(a0, 16.0 / 51.0);
    let s17 = 17f64.sqrt();
    let (c1, c2) = branch_c_values(3.0).map_err(|e| e.to_string())?;
    let root_err = (c1 + 1.0 / s17).abs().max((c2 - 7.0 / (2.0 * s17)).abs());
    let o1 = order_rho_obstruction(3.0, Branch::One).map_err(|e| e.to_string())?;
    let o2 = order_rho_obstruction(3.0, Branch::Two).map_err(|e| e.to_string())?;
    let obs_err = (o1 + 189.0 / 272.0).abs().max((o2 - 63.0 / 68.0).abs());
    let mut energy_fit_worst = 0.0_f64;
    for mu in [3.0, 4.0, 10.0] {
        for branch in Branch::BOTH {
            let c = branch.c(mu).map_err(|e| e.to_string())?;
            let o = order_rho_obstruction(mu, branch).map_err(|e| e.to_string())?;
            let e = fitted_energy_coefficients(mu, c).map_err(|e| e.to_string())?;
            energy_fit_worst = energy_fit_worst.max(rel(e[2], o));
        }
    }
    let grid = log_grid(3.0, 100.0, 1000);
    let report = verify_no_constant_mu_orbit(&grid).map_err(|e| e.to_string())?;
    let exceptions = report.entries.iter().filter(|e| !(e.obstruction1 < 0.0 && e.obstruction2 > 0.0)).count();
    let ok = fit_worst <= 1e-5
        && a0_err <= 1e-5
        && root_err <= 1e-12
        && obs_err <= 1e-12
        && energy_fit_worst <= 1e-5
        && exceptions == 0
        && report.holds();
    check(
        ok,
        format!(
            "series fit {fit_worst:.1e}, a0(3,0) {a0_err:.1e}, roots {root_err:.1e}, obstructions {obs_err:.1e}, order-rho fit {energy_fit_worst:.1e}, sign exceptions {exceptions}/1000"
        ),
    )
    .and_then(|d| within_budget(start.elapsed(), 10.0, d))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for mu0 in [3.2, 4.0, 6.0] {
        let grid = default_c_grid(mu0, 2.0, 101).map_err(|e| e.to_string())?;
        let sweep = conjecture_sweep(mu0, &grid).map_err(|e| e.to_string())?;
        let min = sweep.min_over_c();
        let unphysical = sweep.entries.iter().filter(|e| !e.physical).count();
        ok &= sweep.excludes_all(1e-6);
        parts.push(format!(
            "mu0 {mu0}: rho in [{:.4}, {:.4}], min_C sup|res| {min:.2e} ({unphysical} C unphysical)",
            sweep.rho_min, sweep.rho_max
        ));
    }
    let cfg = IntegratorConfig::default().with_span(5.0).with_sampling(0.01);
    let mut starts: Vec<_> = Fixture::ALL.iter().map(|f| f.orbit().config).collect();
    starts.extend(random_orbits(8, 20, 5.0, 0.05).map_err(|e| e.to_string())?);
    let mut candidates = 0;
    for s in &starts {
        let traj = integrate_cartesian(s, &cfg).map_err(|e| e.to_string())?;
        if classify_trajectory(&traj, 1e-6).map_err(|e| e.to_string())?.verdict == Verdict::ConstantMuCandidate {
            candidates += 1;
        }
    }
    ok &= candidates == 0;
    parts.push(format!("{candidates} candidates over {} orbits", starts.len()));
    check(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("identity suite", criterion_1),
        ("cross-route invariants", criterion_2),
        ("central configurations", criterion_3),
        ("symmetry", criterion_4),
        ("dynamics", criterion_5),
        ("reduced/cartesian equivalence", criterion_6),
        ("series and obstruction", criterion_7),
        ("conjecture sweep", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/8 passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
