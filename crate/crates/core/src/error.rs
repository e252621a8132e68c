// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not Hermitian (max |m - m^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate distribution; use delta limit")]
    DegenerateDistribution,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("eigendecomposition did not converge after {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("convergence failure: halving dt changed the result by {change:e} (limit {limit:e})")]
    StepSizeTooLarge { change: f64, limit: f64 },

    #[error("empty range: tau_min must be strictly below tau_max")]
    EmptyRange,

    #[error("need at least 2 points")]
    TooFewPoints,

    #[error("need at least 3 rows for a fit, got {0}")]
    TooFewRows(usize),

    #[error("row {row}: nonpositive {field} = {value:e}")]
    NonPositive {
        row: usize,
        field: &'static str,
        value: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
