use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("eigenvalue did not converge: {what} (spread {spread:e})")]
    NonConvergence { what: &'static str, spread: f64 },

    #[error("bracket failure: {0}")]
    BracketFailure(&'static str),

    #[error("integrator step size underflow at y = {y}")]
    StepFailure { y: f64 },

    #[error("candidate vector has (near) zero norm")]
    ZeroNorm,

    #[error("normalization check failed: {what} (deviation {deviation:e})")]
    ConsistencyFailure { what: &'static str, deviation: f64 },

    #[error("tail contribution too large at y = {y} (relative {relative:e})")]
    TailDominance { y: f64, relative: f64 },

    #[error("principal value quadrature failed to converge (spread {spread:e})")]
    PvFailure { spread: f64 },

    #[error("{count} sign changes of Re W found where at most one is allowed")]
    MultipleRoots { count: usize },
}
