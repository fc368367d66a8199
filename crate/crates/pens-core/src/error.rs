use thiserror::Error;

/// Errors from grid construction, field operations and diagnostics.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    BadDimension(usize),
    #[error("modes per axis must be even and >= 8, got {0}")]
    BadModes(usize),
    #[error("box length must be positive, got {0}")]
    BadLength(f64),
    #[error("field shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("grids do not match")]
    GridMismatch,
    #[error("non-finite sample encountered in {0}")]
    NonFinite(&'static str),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("order must be non-negative")]
    NegativeOrder,
    #[error("unsupported Lp exponent {0} (expected 1, 2 or inf)")]
    BadLpExponent(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("no lattice mode inside the spectral ball of radius {radius} (box too small)")]
    EmptyBall { radius: f64 },
    #[error("series too short: need at least {need} samples, got {got}")]
    ShortSeries { need: usize, got: usize },
    #[error("fit window [{a}, {b}] contains {got} samples, need at least {need}")]
    ShortWindow { a: f64, b: f64, got: usize, need: usize },
    #[error("values must be positive for a log-log fit (found {0})")]
    NonPositiveValue(f64),
    #[error("snapshot i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("snapshot format: {0}")]
    BadSnapshot(String),
}

/// A simulation abort, carrying the time at which the step failed.
#[derive(Debug, Error)]
#[error("simulation aborted at t = {time}: {kind}")]
pub struct RunError {
    pub time: f64,
    pub kind: StepError,
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("dt = {dt} exceeds advective stability bound {bound}")]
    CflViolation { dt: f64, bound: f64 },
    #[error("non-finite values detected in {field}")]
    NonFinite { field: &'static str },
    #[error("vacuum: min rho = {min_rho} <= 0 (positivity lost)")]
    Vacuum { min_rho: f64 },
    #[error("{0}")]
    Invalid(String),
}
