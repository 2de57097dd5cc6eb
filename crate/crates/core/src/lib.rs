//! Shape-sphere reduction of the planar equal-mass three-body problem under
//! Newtonian gravity.
//!
//! The crate is organised around five layers:
//!
//! * [`geometry`] maps planar configurations onto the shape variable
//!   `ζ = x + iy` and back, and provides the algebraic shape quantities
//!   (`r₁`, `r₂`, `μ₁`, `μ₂`, `μ₃`, and the symmetric invariants `μ`, `ν`, `ρ`)
//!   together with the permutation symmetries of the shape plane.
//! * [`fields`] evaluates the configurational measure `μ` and the invariant
//!   fields `|∇μ|²`, `Δμ`, `λ`, `(Dρ)²` twice: once by differentiating `μ(x, y)`
//!   with the shape-sphere metric, and once through closed forms in `(μ, ρ)`.
//! * [`dynamics`] integrates the Newtonian equations in Cartesian and in reduced
//!   `(I, θ, ζ)` variables and measures the residuals of the dynamical identities
//!   (Lagrange–Jacobi, Saari's relation, the shape equation of motion).
//! * [`conjecture`] contains everything specific to motions with constant `μ`:
//!   level-set kinematics, the curvature-matching condition for `√I`, the
//!   small-`ρ` expansion and the sign obstruction that rules such motions out.
//! * [`sampling`] draws reproducible random shapes for the identity sweeps.
//!
//! All masses equal one and all positions live in the center-of-mass frame.

// `!(x > 0.0)` is deliberate: NaN must fail domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjecture;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod sampling;

pub use dynamics::{IntegratorConfig, Trajectory};
pub use error::{Error, Result};
pub use fields::InvariantFieldValues;
pub use geometry::{MuParts, PlanarConfig, ShapePoint, SizeOrientation, SymmetricInvariants};
pub use num_complex::Complex64;
