//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by estimation, bandwidth selection and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A sample with zero records was supplied.
    #[error("sample is empty")]
    EmptySample,

    /// No observation lies within one bandwidth of the evaluation point, so
    /// the kernel weights have a zero denominator. Usually means the
    /// bandwidth is too small or the evaluation point is outside the data.
    #[error("no observation within bandwidth {bandwidth} of x = {x}")]
    DegenerateWeights { x: f64, bandwidth: f64 },

    /// An operation that requires a fully uncensored sample saw a censored
    /// record.
    #[error("sample contains censored records")]
    ContainsCensoring,

    /// Pilot bandwidth selection needs at least `k` neighbors on one side of
    /// the evaluation point.
    #[error("fewer than {k} covariate neighbors on both sides of x = {x}")]
    InsufficientNeighbors { x: f64, k: usize },

    /// An invalid range or grid description, e.g. `min >= max` or too few
    /// points.
    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// A numeric argument violated its domain, e.g. a nonpositive bandwidth
    /// or a cure probability outside [0, 1].
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A covariate outside the range a scenario is defined on.
    #[error("covariate {x} outside the scenario range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
