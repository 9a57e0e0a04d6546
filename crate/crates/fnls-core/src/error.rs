//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Errors reported by the solver core.
///
/// Numerical non-convergence of the minimizer is deliberately *not* an error
/// (it is reported through `converged = false` on the result); this enum
/// covers contract violations and oracle failures.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Grid dimension outside {1, 2, 3}.
    UnsupportedDim(usize),
    /// Points per axis not a power of two >= 16.
    BadGridSize(usize),
    /// Non-positive box length.
    BadBoxLength(f64),
    /// Fractional order outside the accepted range.
    AlphaRange(f64),
    /// Field length or values violate the grid contract.
    BadField(String),
    /// Two fields were expected on the same grid.
    GridMismatch,
    /// A model-parameter assumption is violated.
    ParamViolation(String),
    /// Operation received an argument outside its domain.
    InvalidArgument(String),
    /// Adaptive quadrature failed to reach the requested tolerance.
    QuadratureNonConvergence { estimate: f64, error: f64, tolerance: f64 },
    /// The excluded-ball extrapolation of the singular integral did not settle.
    OracleNonConvergence { estimate: f64, spread: f64 },
    /// The negativity scan exhausted its ladder; carries the scanned (λ, E) table.
    WitnessNotFound(alloc::vec::Vec<(f64, f64)>),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::UnsupportedDim(d) => write!(f, "unsupported dimension {d} (expected 1, 2 or 3)"),
            CoreError::BadGridSize(m) => {
                write!(f, "points per axis must be a power of two >= 16, got {m}")
            }
            CoreError::BadBoxLength(l) => write!(f, "box length must be positive, got {l}"),
            CoreError::AlphaRange(a) => write!(f, "fractional order alpha={a} outside accepted range"),
            CoreError::BadField(msg) => write!(f, "invalid field: {msg}"),
            CoreError::GridMismatch => write!(f, "fields live on different grids"),
            CoreError::ParamViolation(msg) => write!(f, "parameter assumption violated: {msg}"),
            CoreError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            CoreError::QuadratureNonConvergence { estimate, error, tolerance } => write!(
                f,
                "adaptive quadrature stalled at {estimate} with error estimate {error} > tolerance {tolerance}"
            ),
            CoreError::OracleNonConvergence { estimate, spread } => write!(
                f,
                "singular-integral extrapolation did not converge (estimate {estimate}, spread {spread})"
            ),
            CoreError::WitnessNotFound(table) => write!(
                f,
                "no negative energy found on the scaling ladder ({} points scanned)",
                table.len()
            ),
        }
    }
}

impl core::error::Error for CoreError {}
