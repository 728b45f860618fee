// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} index {value} out of range (allowed {min}..={max})")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    /// Parameters for which the excited-manifold inversion is ill-posed.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("step size rejected: {0}")]
    StepSizeRejected(String),

    #[error("positivity violated at t = {time}: minimum eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("steady state is not unique: generator kernel has dimension {kernel_dim}")]
    NonUniqueSteadyState { kernel_dim: usize },

    #[error("weak-field condition violated: {0}")]
    WeakField(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures caused by the numerics rather than by the request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_)
                | Error::StepSizeRejected(_)
                | Error::PositivityViolation { .. }
                | Error::NonUniqueSteadyState { .. }
        )
    }
}
