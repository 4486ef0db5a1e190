//! Numerical integration engine shared by the field models.
//!
//! Every routine returns a [`QuadratureResult`] carrying an error estimate
//! and a convergence flag; a non-converged result is never silently
//! promoted to a value. Panel sums are accumulated in a fixed order, so
//! identical inputs produce bit-identical outputs.

mod adaptive;
mod extrapolation;
mod momentum;
mod rule;
mod two_d;

pub use adaptive::{integrate_1d, integrate_1d_panels, Endpoint, Interval, MAX_SUBDIVISIONS};
pub use extrapolation::{richardson_limit, Extrapolated, ExtrapolationLadder};
pub use momentum::{damped_momentum_integral, decaying_half_line_integral, DampedTail};
pub use rule::{composite_kronrod, QuadValue};
pub use two_d::{
    integrate_2d_diag_log, integrate_2d_diag_log_symmetric, integrate_2d_diag_offsets, integrate_2d_tensor,
};

use crate::error::{Error, Result};

/// Absolute and relative accuracy request. The target for a value `v` is
/// `max(abs, rel * |v|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }

    /// Budget for one of `parts` independent sub-integrals.
    pub fn split(&self, parts: usize) -> Self {
        Self {
            abs: self.abs / parts as f64,
            rel: self.rel,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs: self.abs * factor,
            rel: self.rel * factor,
        }
    }
}

impl From<f64> for Tolerance {
    fn from(abs: f64) -> Self {
        Self::absolute(abs)
    }
}

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> QuadratureResult<T> {
    pub(crate) fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    /// Turns a non-converged result into [`Error::NonConvergence`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                value: self.value.magnitude(),
                error_estimate: self.error_estimate,
            })
        }
    }
}
