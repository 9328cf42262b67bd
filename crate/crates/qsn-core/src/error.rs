//! Error type shared by the core numerical routines.

use core::fmt;

/// Errors produced by grid construction, functional evaluation, and the
/// closed-form threshold machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A scalar argument was NaN or infinite.
    NonFiniteInput { what: &'static str, value: f64 },
    /// A pointwise evaluation produced a non-finite value at a grid node.
    NonFiniteAtNode { what: &'static str, node: usize },
    /// Scalar Newton iteration failed to reach tolerance.
    NewtonDivergence {
        what: &'static str,
        iters: u32,
        residual: f64,
    },
    /// Two fields living on different grids were combined.
    GridMismatch,
    /// A parameter violated one of the admissibility inequalities. The
    /// `constraint` string names the violated inequality.
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
    },
    /// An operation needed a Gagliardo-Nirenberg constant that is not
    /// attached to the problem parameters.
    MissingGnConstant { exponent_times_1e6: i64 },
    /// Root bracketing failed (inconsistent coefficients).
    BracketFailure { what: &'static str },
    /// A functional term overflowed past the floating range.
    Overflow { what: &'static str },
    /// An operation that needs a nonzero field received the zero field.
    ZeroField { what: &'static str },
}

impl CoreError {
    pub(crate) fn missing_gn(exponent: f64) -> Self {
        CoreError::MissingGnConstant {
            exponent_times_1e6: (exponent * 1.0e6) as i64,
        }
    }
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::NonFiniteInput { what, value } => {
                write!(f, "non-finite input to {what}: {value}")
            }
            CoreError::NonFiniteAtNode { what, node } => {
                write!(f, "non-finite value in {what} at node index {node}")
            }
            CoreError::NewtonDivergence {
                what,
                iters,
                residual,
            } => write!(
                f,
                "Newton iteration for {what} did not converge after {iters} iterations \
                 (residual {residual:e})"
            ),
            CoreError::GridMismatch => write!(f, "fields live on different grids"),
            CoreError::InvalidParameter { name, constraint } => {
                write!(f, "invalid parameter {name}: requires {constraint}")
            }
            CoreError::MissingGnConstant { exponent_times_1e6 } => write!(
                f,
                "missing Gagliardo-Nirenberg constant for exponent {}",
                *exponent_times_1e6 as f64 / 1.0e6
            ),
            CoreError::BracketFailure { what } => {
                write!(f, "root bracketing failed for {what} (inconsistent constants)")
            }
            CoreError::Overflow { what } => write!(f, "floating overflow in {what}"),
            CoreError::ZeroField { what } => write!(f, "{what} is undefined for the zero field"),
        }
    }
}

impl core::error::Error for CoreError {}
