//! Motions with constant configurational measure `μ`.
//!
//! A non-homographic motion with `μ = μ₀` would move the shape along the level
//! curve `μ = μ₀`. Matching the curvature imposed by the equations of motion
//! with the curvature of that curve fixes `√I` as a function of `(μ, ρ, C)`,
//! and the energy relation then becomes an identity in `ρ` that has to hold on
//! a whole interval. Since everything is analytic in `ρ`, it must hold as a
//! power series at `ρ = 0`; the order-`√ρ` term singles out two values of `C`
//! and the order-`ρ` term then has a fixed non-zero sign on each branch.
//!
//! The expansion is taken at `ρ → 0`, which is not a physical shape
//! (physical shapes have `ρ ≥ 1`): the closed forms are used as analytic
//! functions of `ρ`.

pub mod central;
pub mod classify;
pub mod levelset;
pub mod necessary;
pub mod series;
pub mod sweep;

pub use central::{central_configurations, refine_critical_point, CentralConfiguration, CentralKind};
pub use classify::{classify_trajectory, Classification, Verdict};
pub use levelset::{find_seed, trace_level_set, LevelSet, SeedHint};
pub use necessary::{
    energy_residual, energy_rhs, level_curvature, level_set_velocity, orbit_curvature, required_sqrt_i,
    required_sqrt_i_mu_rho, required_sqrt_i_xy, NecessaryConditionContext,
};
pub use series::{
    branch_c_values, order_rho_obstruction, series_coefficients, sqrt_rho_coefficient, verify_no_constant_mu_orbit,
    Branch, ProofReport, SeriesCoefficients,
};
pub use sweep::{conjecture_sweep, SweepResult};
