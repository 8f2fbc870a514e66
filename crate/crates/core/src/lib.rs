//! Positivity-preserving finite difference WENO solver for the Ten-Moment
//! Gaussian-closure equations with body-force sources.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. Everything here is pure computation on in-memory fields; file
//! formats, the command-line driver and wall-clock timing live in the
//! companion `tenmoment` crate.
//!
//! Module map:
//!
//! * [`state`]: conserved/primitive algebra, physical fluxes, wave speeds and
//!   the admissibility predicate.
//! * [`eigen`]: characteristic decomposition of the flux Jacobians.
//! * [`weno`]: fifth-order WENO-JS, WENO-Z and WENO-AO face reconstruction.
//! * [`flux`]: Lax-Friedrichs splitting, characteristic face fluxes and the
//!   semi-discrete residual in one and two dimensions.
//! * [`limiter`]: the scaling limiter that keeps the forward-Euler update
//!   admissible.
//! * [`source`]: exact propagation of the linear body-force source.
//! * [`integrator`]: SSPRK3, integrating-factor SSPRK3 and adaptive CFL control.
//! * [`grid`]: uniform meshes, ghost layers and boundary conditions.
//! * [`problems`]: the registered test problems and error norms.
#![cfg_attr(not(feature = "std"), no_std)]
// Negated comparisons are deliberate: NaN must fail every positivity test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod eigen;
pub mod error;
pub mod flux;
pub mod grid;
pub mod integrator;
pub mod limiter;
mod math;
pub mod problems;
pub mod source;
pub mod state;
pub mod weno;

pub use error::{Error, Result};
pub use grid::{BoundaryCondition, BoundaryKind, GridField, Mesh};
pub use integrator::{CflMode, CflPolicy, Solver, StepOutcome};
pub use problems::{ProblemId, ProblemSpec};
pub use source::{Potential, PotentialSpec};
pub use state::{ConservedState, PrimitiveState};
pub use weno::{WenoKind, WenoVariant};

/// Default admissibility margin shared by the limiter and the stage checks.
pub const DEFAULT_EPS: f64 = 1e-13;
