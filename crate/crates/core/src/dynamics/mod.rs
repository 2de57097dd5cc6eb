//! Newtonian dynamics of the three bodies in Cartesian and in reduced
//! `(I, θ, ζ)` variables, together with residual checks of the identities
//! that hold along solutions.
//!
//! The reduced system is integrated in physical time `t`. The shape obeys
//!
//! ```text
//! x'' = (4C − (8/3) x∧x') / (1 + (4/3)|x|²) · (y', −x') + 3√I ∇μ
//! ```
//!
//! where `'` is `d/ds` and `ds/dt = (1 + (4/3)|x|²)/(2I)`. The size follows
//! `Ï = 4E + 2μ/√I` and the orientation is recovered from the angular
//! momentum,
//!
//! ```text
//! C = I (θ̇ + (4/3) (x∧ẋ)/(1 + (4/3)|x|²))   ⇒   θ̇ = C/I − (4/3)(x∧ẋ)/(1 + (4/3)|x|²).
//! ```

pub mod fixtures;
pub mod integrator;
pub mod newton;
pub mod reduced;
pub mod residuals;
mod tableau;
pub mod trajectory;

pub use fixtures::{fixture_orbit, Fixture, FixtureOrbit};
pub use integrator::{integrate, Control, IntegrationStats, IntegratorConfig};
pub use newton::{conserved_quantities, integrate_cartesian, newton_acceleration, COLLISION_DISTANCE};
pub use reduced::{integrate_reduced, reconstruct_state, reduce_state, ReducedInitialData, ReducedState};
pub use residuals::{lagrange_jacobi_residual, saari_relation_residual, shape_eom_residual, ResidualSeries};
pub use trajectory::{reparametrize_time, Sample, Termination, Trajectory};
