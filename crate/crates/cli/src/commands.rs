//! Subcommand implementations. Each returns whether every check passed.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use saari_core::conjecture::classify::DEFAULT_TOLERANCE;
use saari_core::conjecture::series::{log_grid, scan_sqrt_rho_roots};
use saari_core::conjecture::{
    branch_c_values, central_configurations, classify_trajectory, find_seed, trace_level_set,
    verify_no_constant_mu_orbit, CentralKind, ProofReport, SeedHint,
};
use saari_core::dynamics::{fixture_orbit, integrate_cartesian, integrate_reduced, ReducedInitialData, Termination};
use saari_core::fields::{closed_forms, field_values_xy, InvariantFieldValues};
use saari_core::sampling::{is_non_degenerate, ShapeSampler};
use saari_core::{Complex64, IntegratorConfig, PlanarConfig};

use crate::config::ConfigFile;
use crate::output::{check_writable, write_file, write_json, Format};
use crate::{Cli, Command, CommonArgs, SimulateArgs, TraceLevelsetArgs, VerifyIdentitiesArgs, VerifyProofArgs};

/// Common settings after merging flags, config file and defaults.
struct Common {
    file: ConfigFile,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    tol: Option<f64>,
}

impl Common {
    fn new(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let out = file.resolve::<PathBuf>(args.out.clone(), "out")?;
        let format = file.resolve(args.format, "format")?;
        let seed = file.resolve(args.seed, "seed")?;
        let tol = file.resolve(args.tol, "tol")?;
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tol must be positive, got {t}");
            }
        }
        Ok(Self { file, out, format, seed, tol })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Output path, with an extension matching the format when defaulted.
    fn out_or(&self, stem: &str, format: Format) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            PathBuf::from(format!("{stem}.{ext}"))
        })
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run(cli: &Cli) -> Result<bool> {
    let common = Common::new(&cli.common)?;
    match &cli.command {
        Command::Simulate(args) => simulate(&common, args),
        Command::VerifyIdentities(args) => verify_identities(&common, args),
        Command::VerifyProof(args) => verify_proof(&common, args),
        Command::TraceLevelset(args) => trace_levelset(&common, args),
        Command::CentralConfigs => central_configs(&common),
    }
}

fn wrote(path: &Path) {
    println!("wrote {}", path.display());
}

fn parse_initial(text: &str) -> Result<PlanarConfig> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("initial condition `{s}`: {e}")))
        .collect::<Result<_>>()?;
    if v.len() != 12 {
        bail!("initial condition needs 12 numbers, got {}", v.len());
    }
    let c = |k: usize| Complex64::new(v[k], v[k + 1]);
    PlanarConfig::new([c(0), c(2), c(4)], [c(6), c(8), c(10)]).context("initial condition")
}

fn simulate(common: &Common, args: &SimulateArgs) -> Result<bool> {
    let f = &common.file;
    let fixture = f.resolve(args.fixture.clone(), "fixture")?;
    let initial = f.resolve(args.initial.clone(), "initial")?;
    let (label, start) = match (fixture, initial) {
        (Some(_), Some(_)) => bail!("give either a fixture or an initial condition, not both"),
        (None, Some(text)) => ("initial condition".to_string(), parse_initial(&text)?),
        (fixture, None) => {
            let name = fixture.unwrap_or_else(|| "lagrange_circular".into());
            let orbit = fixture_orbit(&name)?;
            (format!("fixture {name}"), orbit.config)
        }
    };
    let t_span = f.resolve_or(args.t_span, "t-span", 10.0)?;
    let dt = f.resolve_or(args.dt, "dt", 0.01)?;
    let tol = common.tol_or(1e-12);
    let reduced = f.switch(args.reduced, "reduced")?;
    let classify_tol = f.resolve_or(args.classify_tol, "classify-tol", DEFAULT_TOLERANCE)?;
    let format = common.format_or(Format::Csv);
    let out = common.out_or("trajectory", format);
    check_writable(&out)?;

    let cfg = IntegratorConfig::default().with_span(t_span).with_sampling(dt).with_tolerances(tol, tol);
    cfg.validate()?;
    let traj = if reduced {
        integrate_reduced(&ReducedInitialData::from_config(&start)?, &cfg)?
    } else {
        integrate_cartesian(&start, &cfg)?
    };
    match format {
        Format::Csv => write_file(&out, |w| traj.write_csv(w))?,
        Format::Json => write_json(&out, &traj.to_json())?,
    }

    let equations = if reduced { "reduced" } else { "newtonian" };
    println!("{label}, {equations} equations, {} samples", traj.len());
    println!("energy drift: {:.3e}", traj.energy_drift());
    println!("angular momentum drift: {:.3e}", traj.angular_momentum_drift());
    match classify_trajectory(&traj, classify_tol) {
        Ok(c) => println!("verdict: {} (mu drift {:.3e})", c.verdict, c.mu_drift),
        Err(e) => println!("verdict: unavailable ({e})"),
    }
    match traj.termination {
        Termination::Completed => {}
        Termination::Collision { t, pair } => {
            println!("truncated: collision between bodies {} and {} at t = {t}", pair.0, pair.1)
        }
        Termination::Collapse { t } => println!("truncated: total collapse at t = {t}"),
    }
    wrote(&out);
    Ok(true)
}

#[derive(Debug, Serialize)]
struct CheckResult {
    name: &'static str,
    count: usize,
    max_residual: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct IdentityReport {
    seed: u64,
    samples: usize,
    checks: Vec<CheckResult>,
    passed: bool,
}

/// Worst relative difference over the five invariant fields.
fn field_difference(a: &InvariantFieldValues, b: &InvariantFieldValues) -> f64 {
    a.as_array().iter().zip(b.as_array()).map(|(x, y)| (x - y).abs() / y.abs().max(1.0)).fold(0.0, f64::max)
}

fn verify_identities(common: &Common, args: &VerifyIdentitiesArgs) -> Result<bool> {
    let samples = common.file.resolve_or(args.samples, "samples", 1000)?;
    if samples == 0 {
        bail!("--samples must be positive");
    }
    let seed = common.seed.unwrap_or(0);
    let format = common.format_or(Format::Json);
    let out = common.out_or("identities", format);
    check_writable(&out)?;

    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let scaled = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    // (name, default tolerance, count, worst)
    let mut checks: Vec<(&'static str, f64, usize, f64)> = vec![
        ("nu_identity", 1e-12, 0, 0.0),
        ("mu3_routes", 1e-12, 0, 0.0),
        ("closed_forms", 1e-6, 0, 0.0),
        ("cyclic_invariance", 1e-10, 0, 0.0),
        ("reflection_invariance", 1e-10, 0, 0.0),
        ("metric_isometry", 1e-10, 0, 0.0),
    ];
    let mut record = |k: usize, value: f64| {
        checks[k].2 += 1;
        checks[k].3 = checks[k].3.max(value);
    };
    let dz = Complex64::new(0.37, -1.1);
    for shape in ShapeSampler::new(seed).take(samples) {
        let inv = shape.symmetric_invariants()?;
        record(0, inv.identity_residual());
        record(1, rel(shape.mu3_from_ratios(), shape.mu3()));
        let cyclic = shape.cyclic_image()?;
        let reflected = shape.reflected();
        let (image, dz_image) = shape.cyclic_pushforward(dz)?;
        record(5, rel(image.metric_speed(dz_image), shape.metric_speed(dz)));
        let mut invariants = [0.0_f64; 2];
        for (slot, other) in [cyclic, reflected].iter().enumerate() {
            let o = other.symmetric_invariants()?;
            invariants[slot] = scaled(o.mu, inv.mu).max(scaled(o.rho, inv.rho));
        }
        if is_non_degenerate(&shape) {
            let xy = field_values_xy(&shape)?;
            record(2, rel_fields(&closed_forms(&inv)?, &xy));
            invariants[0] = invariants[0].max(field_difference(&field_values_xy(&cyclic)?, &xy));
            invariants[1] = invariants[1].max(field_difference(&field_values_xy(&reflected)?, &xy));
        }
        record(3, invariants[0]);
        record(4, invariants[1]);
    }

    let results: Vec<CheckResult> = checks
        .into_iter()
        .map(|(name, default, count, worst)| {
            let tolerance = common.tol_or(default);
            CheckResult { name, count, max_residual: worst, tolerance, passed: worst <= tolerance }
        })
        .collect();
    let passed = results.iter().all(|c| c.passed);
    let report = IdentityReport { seed, samples, checks: results, passed };
    match format {
        Format::Json => write_json(&out, &report)?,
        Format::Csv => write_file(&out, |w| {
            writeln!(w, "check,count,max_residual,tolerance,passed")?;
            for c in &report.checks {
                writeln!(w, "{},{},{:?},{:?},{}", c.name, c.count, c.max_residual, c.tolerance, c.passed)?;
            }
            Ok(())
        })?,
    }
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {:<22} max {:.3e} tol {:.1e} ({} shapes)", c.name, c.max_residual, c.tolerance, c.count);
    }
    wrote(&out);
    Ok(passed)
}

/// Worst plain relative difference over the five invariant fields.
fn rel_fields(closed: &InvariantFieldValues, xy: &InvariantFieldValues) -> f64 {
    closed
        .as_array()
        .iter()
        .zip(xy.as_array())
        .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

#[derive(Debug, Serialize)]
struct ScanEntry {
    mu0: f64,
    roots: Vec<f64>,
    #[serde(rename = "C1")]
    c1: f64,
    #[serde(rename = "C2")]
    c2: f64,
    max_error: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct ProofOutput {
    #[serde(flatten)]
    report: ProofReport,
    series_fit_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_scan: Option<Vec<ScanEntry>>,
    passed: bool,
}

fn scan_entry(mu0: f64, tol: f64) -> Result<ScanEntry> {
    let (c1, c2) = branch_c_values(mu0)?;
    let reach = 4.0 * c1.abs().max(c2.abs()) + 1.0;
    let roots = scan_sqrt_rho_roots(mu0, -reach, reach, 4001)?;
    let distance = |c: f64| roots.iter().map(|r| (r - c).abs()).fold(f64::INFINITY, f64::min);
    let max_error = distance(c1).max(distance(c2));
    let passed = roots.len() == 2 && max_error <= tol;
    Ok(ScanEntry { mu0, roots, c1, c2, max_error, passed })
}

fn verify_proof(common: &Common, args: &VerifyProofArgs) -> Result<bool> {
    let f = &common.file;
    let grid = if !args.mu.is_empty() {
        args.mu.clone()
    } else if let Some(list) = f.resolve::<String>(None, "mu")? {
        list.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("config key `mu`: `{s}`: {e}")))
            .collect::<Result<_>>()?
    } else {
        let lo = f.resolve_or(args.mu_min, "mu-min", 3.0)?;
        let hi = f.resolve_or(args.mu_max, "mu-max", 100.0)?;
        let n = f.resolve_or(args.mu_points, "mu-points", 1000)?;
        if n == 0 || lo.is_nan() || hi.is_nan() || hi < lo {
            bail!("mu grid needs mu-points >= 1 and mu-max >= mu-min");
        }
        log_grid(lo, hi, n)
    };
    let c_scan = f.switch(args.c_scan, "c-scan")?;
    let format = common.format_or(Format::Json);
    let out = common.out_or("proof", format);
    check_writable(&out)?;

    let report = verify_no_constant_mu_orbit(&grid)?;
    let fit_tol = common.tol_or(1e-5);
    let scan = if c_scan {
        let tol = common.tol_or(1e-9);
        Some(grid.iter().map(|&mu| scan_entry(mu, tol)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    let scan_ok = scan.as_ref().is_none_or(|s| s.iter().all(|e| e.passed));
    let fit_ok = report.max_series_fit_error <= fit_tol && report.max_obstruction_fit_error <= fit_tol;
    let passed = report.holds() && fit_ok && scan_ok;

    let output = ProofOutput { report, series_fit_tolerance: fit_tol, c_scan: scan, passed };
    match format {
        Format::Json => write_json(&out, &output)?,
        Format::Csv => write_file(&out, |w| {
            writeln!(w, "mu0,C1,C2,obstruction1,obstruction2,series_fit_error,verdict")?;
            for e in &output.report.entries {
                writeln!(
                    w,
                    "{:?},{:?},{:?},{:?},{:?},{:?},{}",
                    e.mu0, e.c1, e.c2, e.obstruction1, e.obstruction2, e.series_fit_error, e.verdict
                )?;
            }
            Ok(())
        })?,
    }
    let r = &output.report;
    println!(
        "{} mu values in [{}, {}]",
        r.entries.len(),
        grid.iter().copied().fold(f64::INFINITY, f64::min),
        grid.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    );
    println!("min |obstruction|: {:.6e}", r.min_abs_obstruction);
    println!("max series fit error: {:.3e} (tol {fit_tol:.1e})", r.max_series_fit_error);
    println!("max obstruction fit error: {:.3e} (tol {fit_tol:.1e})", r.max_obstruction_fit_error);
    if let Some(scan) = &output.c_scan {
        for e in scan.iter().take(5) {
            println!(
                "mu0 {}: roots {:?} expected [{:?}, {:?}] max error {:.2e}",
                e.mu0, e.roots, e.c1, e.c2, e.max_error
            );
        }
        let failed = scan.iter().filter(|e| !e.passed).count();
        println!("C-scan: {failed} of {} mu values failed", scan.len());
    }
    println!("verdict: {}", r.verdict);
    wrote(&out);
    Ok(output.passed)
}

fn trace_levelset(common: &Common, args: &TraceLevelsetArgs) -> Result<bool> {
    let f = &common.file;
    let mu0: f64 = f.resolve(args.mu0, "mu0")?.ok_or_else(|| anyhow!("--mu0 is required"))?;
    let hint: SeedHint = f.resolve_or(args.seed_near.clone(), "seed-near", "auto".into())?.parse()?;
    let tol = common.tol_or(1e-9);
    let format = common.format_or(Format::Csv);
    let out = common.out_or("levelset", format);
    check_writable(&out)?;

    let seed = find_seed(mu0, hint)?;
    let level = trace_level_set(mu0, seed)?;
    match format {
        Format::Csv => write_file(&out, |w| level.write_csv(w))?,
        Format::Json => write_json(&out, &level)?,
    }
    let err = level.max_level_error();
    println!("mu0 {mu0}: {} points, closed {}, truncated {}", level.len(), level.closed, level.truncated);
    println!("rho range: [{:?}, {:?}]", level.rho_min, level.rho_max);
    println!("max |mu - mu0|: {err:.3e} (tol {tol:.1e})");
    wrote(&out);
    Ok(err <= tol)
}

#[derive(Debug, Serialize)]
struct CentralRow {
    kind: &'static str,
    x: f64,
    y: f64,
    mu: f64,
    rho: f64,
    grad_norm_sq: f64,
    laplacian: f64,
}

fn central_configs(common: &Common) -> Result<bool> {
    let tol = common.tol_or(1e-10);
    let rows: Vec<CentralRow> = central_configurations()
        .iter()
        .map(|cc| {
            let inv = cc.shape.symmetric_invariants()?;
            let fields = field_values_xy(&cc.shape)?;
            let kind = match cc.kind {
                CentralKind::Lagrange => "lagrange",
                CentralKind::Euler => "euler",
            };
            Ok(CentralRow {
                kind,
                x: cc.shape.x,
                y: cc.shape.y,
                mu: inv.mu,
                rho: inv.rho,
                grad_norm_sq: fields.grad_norm_sq,
                laplacian: fields.laplacian,
            })
        })
        .collect::<Result<_>>()?;
    let write_rows = |w: &mut dyn Write| -> std::io::Result<()> {
        writeln!(w, "kind,x,y,mu,rho,grad_norm_sq,laplacian")?;
        for r in &rows {
            writeln!(
                w,
                "{},{:?},{:?},{:?},{:?},{:?},{:?}",
                r.kind, r.x, r.y, r.mu, r.rho, r.grad_norm_sq, r.laplacian
            )?;
        }
        Ok(())
    };
    match (&common.out, common.format_or(Format::Csv)) {
        (Some(out), Format::Csv) => {
            write_file(out, write_rows)?;
            wrote(out);
        }
        (Some(out), Format::Json) => {
            write_json(out, &rows)?;
            wrote(out);
        }
        (None, Format::Csv) => write_rows(&mut std::io::stdout().lock())?,
        (None, Format::Json) => println!("{}", serde_json::to_string_pretty(&rows)?),
    }
    Ok(rows.iter().all(|r| r.grad_norm_sq.abs() <= tol))
}
