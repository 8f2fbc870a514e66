use thiserror::Error;

/// Axis of a flux sweep or a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Density below the division floor; the state cannot be converted.
    #[error("density {rho:e} is too close to zero to convert to primitive variables")]
    ZeroDensity { rho: f64 },

    /// A wave speed or eigensystem was requested for an inadmissible state.
    #[error("state is not admissible (rho = {rho:e}, normal pressure = {pressure:e})")]
    NonAdmissible { rho: f64, pressure: f64 },

    /// Reconstruction produced NaN or infinity.
    #[error("non-finite flux at {axis:?}-face {face} of line {line}")]
    NonFinite { axis: Axis, line: usize, face: usize },

    /// The limiter anchor itself violates the admissibility margins.
    #[error("limiter anchor violates the admissibility margin {eps:e}")]
    AnchorViolation { eps: f64 },

    /// A stage of the Runge-Kutta update left the admissible set.
    #[error("positivity lost in Runge-Kutta stage {stage} at cell {cell}")]
    PositivityFailure { stage: u8, cell: usize },

    /// The positivity-preserving path itself produced an inadmissible state.
    #[error("step at t = {t} failed even with the limiter and the safe CFL: {detail}")]
    Fatal { t: f64, detail: &'static str },

    #[error("unknown problem id `{0}`")]
    UnknownProblem(alloc::string::String),

    #[error("invalid configuration: {0}")]
    Config(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
