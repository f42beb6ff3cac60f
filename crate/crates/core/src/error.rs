use thiserror::Error;

/// Errors raised by the solvers and the supporting numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (e.g. a nonpositive density).
    #[error("domain error: {0}")]
    Domain(String),

    /// Pressure-law or grid parameters violate their invariants.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A documented precondition of the call was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not reach tolerance {tol:e} within {max_intervals} subintervals (error estimate {estimate:e})")]
    Quadrature {
        tol: f64,
        estimate: f64,
        max_intervals: usize,
    },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    /// Shock speed requested between two states of equal density.
    #[error("degenerate jump: left and right densities coincide ({0})")]
    DegenerateJump(f64),

    #[error("wave {index} is a {found}, expected a shock")]
    WrongWaveKind { index: usize, found: &'static str },

    #[error("time must be positive, got {0}")]
    InvalidTime(f64),

    /// Delta-shock formation condition of the generalized Chaplygin system fails.
    #[error("delta-shock condition not met: {0}")]
    ConditionNotMet(String),

    /// A limit verdict was requested for data that cannot exhibit the limit.
    #[error("limit not applicable: {0}")]
    NotApplicable(String),

    #[error("density lost positivity in cell {cell} at t = {time} (rho = {rho})")]
    Positivity { cell: usize, time: f64, rho: f64 },

    #[error("time step collapsed to {dt:e} at t = {time}")]
    CflCollapse { dt: f64, time: f64 },

    /// Waves reached the computational boundary before the final time.
    #[error("boundary contaminated at t = {time}: {detail}")]
    Boundary { time: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
