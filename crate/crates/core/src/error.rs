//! Crate-wide error type.
//!
//! Invalid inputs are rejected at construction (`InvalidParameter`), while
//! computations that leave their numerical domain mid-flight report
//! `NumericalDomain` instead of silently returning junk. A log-likelihood of
//! `-inf` is *not* an error anywhere in this crate; it is the sentinel for
//! "outside support" and flows through the samplers as a value.

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Snapshot of a nested-sampling run that hit its iteration cap, kept in
/// unit-cube coordinates so the error type stays independent of the
/// parameter type.
#[derive(Debug, Clone)]
pub struct PartialRun {
    /// Iterations completed before giving up.
    pub iterations: u64,
    /// Evidence accumulated so far (natural log).
    pub log_z: f64,
    /// ln X of the last removed point.
    pub ln_x: f64,
    /// Largest log-likelihood in the live set.
    pub max_live_log_lik: f64,
    /// Live points as (unit-cube coordinates, log-likelihood).
    pub live_points: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter rejected at construction: wrong range, non-finite, or an
    /// inconsistent combination.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A computation produced a value outside its numerical domain
    /// (non-finite intermediate, non-positive conditional variance, ...).
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    /// Dense symmetric factorization hit a non-positive pivot, so the
    /// matrix is not positive definite to working precision.
    #[error("matrix not positive definite: pivot {pivot:e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// Unit-cube coordinate outside the open interval (0, 1), where the
    /// prior transform is undefined.
    #[error("unit-cube coordinate {value} at index {index} is outside (0, 1)")]
    BoundaryCoordinate { index: usize, value: f64 },

    /// Inputs whose lengths must agree do not.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// Empty input where at least one element is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Nested sampling exhausted `max_iterations` before the termination
    /// criterion fired; carries the partial state for post-mortems.
    #[error("nested sampling did not converge within {iterations} iterations")]
    NestedNonConvergence {
        iterations: u64,
        partial: Box<PartialRun>,
    },

    /// Input/output or serialization failure in file-backed helpers.
    #[error("io error: {0}")]
    Io(String),
}
