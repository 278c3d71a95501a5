use thiserror::Error;

/// Failure to evaluate a vector field at a point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("field undefined at {point:?}: {reason}")]
pub struct FieldError {
    pub point: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid is not symmetric about 0: t[{lo}] = {t_lo:e}, t[{hi}] = {t_hi:e}")]
    AsymmetricGrid {
        lo: usize,
        hi: usize,
        t_lo: f64,
        t_hi: f64,
    },

    #[error("grid is not uniform: spacing {found:e} at index {index}, expected {expected:e}")]
    NonUniformGrid {
        index: usize,
        found: f64,
        expected: f64,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Field(#[from] FieldError),

    #[error("iterate {iteration} left the tube: |phi - phi0| = {excursion:e} > b = {b:e} at t - t0 = {offset:e}")]
    TubeEscape {
        iteration: usize,
        offset: f64,
        excursion: f64,
        b: f64,
    },

    #[error("bound M is zero (constant field); the existence interval is unbounded and needs an explicit cap")]
    UnboundedInterval,

    #[error("{kind} symmetry check failed: defect {defect:e} exceeds {tol:e}")]
    SymmetryViolation {
        kind: &'static str,
        defect: f64,
        tol: f64,
    },

    #[error("field `{field}` is not odd on the ball of radius {radius:e} (odd defect {odd_defect:e}, tol {tol:e})")]
    FieldNotOdd {
        field: String,
        radius: f64,
        odd_defect: f64,
        tol: f64,
    },

    #[error("field `{field}` is undefined at the origin, so no odd solution through y(t0) = 0 exists: {reason}")]
    OddOriginSingular { field: String, reason: String },

    #[error("trajectories do not overlap in time")]
    DisjointRanges,

    #[error("unknown system {0}")]
    UnknownSystem(String),

    #[error("invalid parameters for `{system}`: {message}; schema: {schema}")]
    InvalidParams {
        system: String,
        message: String,
        schema: String,
    },

    #[error("registration check failed for `{system}`: {message}")]
    Registration { system: String, message: String },

    #[error("no convergence after {iterations} iterations (last increment {last_increment:e})")]
    NotConverged { iterations: usize, last_increment: f64 },

    #[error("every member of the family failed")]
    EmptyFamily,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
