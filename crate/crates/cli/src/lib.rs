//! Command-line driver for the Ten-Moment WENO solver: configuration files,
//! CSV/VTK output, run manifests, refinement studies and timing comparisons.

// Negated comparisons are deliberate: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod driver;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::CliError;
