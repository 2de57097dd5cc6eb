use approx::assert_relative_eq;
use saari_core::dynamics::fixtures::random_orbits;
use saari_core::dynamics::{
    fixture_orbit, integrate_cartesian, integrate_reduced, lagrange_jacobi_residual, saari_relation_residual,
    shape_eom_residual, Fixture, IntegratorConfig, ReducedInitialData, Termination,
};
use saari_core::geometry::ShapePoint;

fn cfg(span: f64, dt: f64) -> IntegratorConfig {
    IntegratorConfig::default().with_span(span).with_sampling(dt)
}

#[test]
fn lagrange_circular_is_rigid_rotation() {
    let o = fixture_orbit("lagrange_circular").unwrap();
    let traj = integrate_cartesian(&o.config, &cfg(10.0, 0.01)).unwrap();
    assert!(traj.is_complete());
    assert_eq!(traj.len(), 1001);
    let w = 3f64.sqrt();
    for s in &traj.samples {
        let mu = s.config.configurational_measure().unwrap();
        assert!((mu - 3.0).abs() <= 1e-8, "mu {mu} at {}", s.t);
        assert!((s.inertia - 1.0).abs() <= 1e-8);
        assert!((s.energy + 1.5).abs() <= 1e-9);
        assert!((s.angular_momentum - w).abs() <= 1e-9);
        let rot = saari_core::Complex64::from_polar(1.0, w * s.t);
        for k in 0..3 {
            assert!((s.config.positions[k] - rot * o.config.positions[k]).norm() < 1e-8);
        }
    }
}

#[test]
fn drift_bounds_on_fixtures() {
    for f in [Fixture::LagrangeCircular, Fixture::EulerCollinearCircular, Fixture::GenericPerturbed] {
        let o = f.orbit();
        let traj = integrate_cartesian(&o.config, &cfg(4.0, 0.01)).unwrap();
        assert!(traj.energy_drift() <= 1e-11, "{f}: {}", traj.energy_drift());
        assert!(traj.angular_momentum_drift() <= 1e-11, "{f}");
        for s in &traj.samples {
            assert!(s.config.center_of_mass().norm() <= 1e-12);
            assert!(s.config.total_momentum().norm() <= 1e-12);
        }
    }
}

#[test]
fn freefall_keeps_equilateral_shape_until_collision() {
    let o = fixture_orbit("equilateral_freefall").unwrap();
    let traj = integrate_cartesian(&o.config, &cfg(1.0, 0.001)).unwrap();
    assert!(matches!(traj.termination, Termination::Collision { .. }));
    for s in &traj.samples {
        assert!((s.shape.zeta() - ShapePoint::LAGRANGE_UPPER.zeta()).norm() <= 1e-8);
    }
    let sr = saari_relation_residual(&traj).unwrap();
    assert!(sr.max_abs() <= 1e-8, "{}", sr.max_abs());
}

#[test]
fn residuals_on_lagrange() {
    let o = fixture_orbit("lagrange_circular").unwrap();
    let traj = integrate_cartesian(&o.config, &cfg(10.0, 0.01)).unwrap();
    assert!(lagrange_jacobi_residual(&traj).unwrap().max_abs() <= 1e-6);
    assert!(saari_relation_residual(&traj).unwrap().max_abs() <= 1e-8);
    assert!(shape_eom_residual(&traj).unwrap().max_abs() <= 1e-8);
}

#[test]
fn residuals_on_perturbed_orbit() {
    let o = fixture_orbit("generic_perturbed").unwrap();
    let fine = integrate_cartesian(&o.config, &cfg(4.0, 1e-3)).unwrap();
    let lj = lagrange_jacobi_residual(&fine).unwrap().max_abs();
    let eom = shape_eom_residual(&fine).unwrap().max_abs();
    let sr = saari_relation_residual(&fine).unwrap().max_abs();
    eprintln!("lj {lj:e} eom {eom:e} saari {sr:e}");
    assert!(lj <= 1e-5);
    assert!(eom <= 1e-4);
    let ladder: Vec<_> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| {
            let t = integrate_cartesian(&o.config, &cfg(4.0, dt)).unwrap();
            [
                lagrange_jacobi_residual(&t).unwrap().max_abs(),
                saari_relation_residual(&t).unwrap().max_abs(),
                shape_eom_residual(&t).unwrap().max_abs(),
            ]
        })
        .collect();
    for k in 0..3 {
        for w in ladder.windows(2) {
            let ratio = w[0][k] / w[1][k];
            eprintln!("identity {k}: ratio {ratio}");
            assert!(ratio > 3.0 && ratio < 5.0, "identity {k}: ratio {ratio}");
        }
    }
}

#[test]
fn collinear_orbit_stays_on_axis() {
    let o = fixture_orbit("euler_collinear_circular").unwrap();
    let traj = integrate_cartesian(&o.config, &cfg(3.0, 0.01)).unwrap();
    let r = shape_eom_residual(&traj).unwrap();
    assert!(r.max_abs_component(1) <= 1e-10, "{}", r.max_abs_component(1));
}

#[test]
fn scaled_orbit_is_a_solution() {
    let o = fixture_orbit("generic_perturbed").unwrap();
    let lambda: f64 = 1.7;
    let base = integrate_cartesian(&o.config, &cfg(3.0, 0.01)).unwrap();
    let scaled_start = o.config.scaled_rotated(lambda, 0.4);
    let tscale = lambda.powf(1.5);
    let scaled = integrate_cartesian(&scaled_start, &cfg(3.0 * tscale, 0.01 * tscale)).unwrap();
    assert_eq!(base.len(), scaled.len());
    let rot = saari_core::Complex64::from_polar(lambda, 0.4);
    for (a, b) in base.samples.iter().zip(&scaled.samples) {
        for k in 0..3 {
            assert!((b.config.positions[k] - rot * a.config.positions[k]).norm() <= 1e-8);
        }
    }
    assert!(lagrange_jacobi_residual(&scaled).unwrap().max_abs() <= 1e-5);
}

#[test]
fn reduced_matches_cartesian() {
    let mut starts = random_orbits(21, 3, 5.0, 0.05).unwrap();
    starts.push(Fixture::GenericPerturbed.orbit().config);
    for start in starts {
        let c = cfg(5.0, 0.01);
        let cart = integrate_cartesian(&start, &c).unwrap();
        let init = ReducedInitialData::from_config(&start).unwrap();
        let red = integrate_reduced(&init, &c).unwrap();
        assert_eq!(cart.len(), red.len());
        let mut worst = 0.0_f64;
        for (a, b) in cart.samples.iter().zip(&red.samples) {
            for k in 0..3 {
                worst = worst.max((a.config.positions[k] - b.config.positions[k]).norm());
            }
            assert!((b.energy - init.energy).abs() <= 1e-8);
        }
        eprintln!("reduced vs cartesian {worst:e}");
        assert!(worst <= 1e-6);
    }
}

#[test]
fn reduced_energy_is_constant() {
    let o = fixture_orbit("generic_perturbed").unwrap();
    let init = ReducedInitialData::from_config(&o.config).unwrap();
    let red = integrate_reduced(&init, &cfg(5.0, 0.01)).unwrap();
    assert_relative_eq!(init.energy, o.energy, epsilon = 1e-12);
    assert!(red.energy_drift() <= 1e-8);
    // the integrated s agrees with quadrature of the sampled rate
    let cart = integrate_cartesian(&o.config, &cfg(5.0, 0.01)).unwrap();
    for (a, b) in cart.samples.iter().zip(&red.samples) {
        assert!((a.s - b.s).abs() <= 1e-8 * b.s.max(1.0), "{} vs {}", a.s, b.s);
    }
}
