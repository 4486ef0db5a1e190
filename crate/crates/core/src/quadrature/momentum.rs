//! Momentum-space integrals over the real line with a certified
//! exponential tail.

use super::adaptive::{integrate_1d_panels, Interval};
use super::rule::QuadValue;
use super::{QuadratureResult, Tolerance};
use crate::error::{Error, Result};

/// Caller-supplied decay certificate: `|f(p)| <= bound * exp(-rate * |p|)`
/// for all `p`. With `even` set the integrand is known to satisfy
/// `f(-p) = f(p)` and only the half line is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedTail {
    pub rate: f64,
    pub bound: f64,
    pub even: bool,
}

impl DampedTail {
    pub fn new(rate: f64, bound: f64) -> Self {
        Self {
            rate,
            bound,
            even: false,
        }
    }

    pub fn even(mut self) -> Self {
        self.even = true;
        self
    }

    /// Momentum beyond which the certified tail integral (both sides) is below `budget`.
    pub fn cutoff(&self, budget: f64) -> f64 {
        let x = (2.0 * self.bound / (self.rate * budget)).ln() / self.rate;
        x.max(1.0 / self.rate)
    }

    pub fn tail_bound(&self, cutoff: f64) -> f64 {
        2.0 * self.bound * (-self.rate * cutoff).exp() / self.rate
    }
}

/// `∫_{-∞}^{∞} f(p) dp` for integrands obeying the `tail` certificate.
///
/// The line is cut at `±P` with `P` chosen from the certificate so that the
/// discarded tail costs at most a tenth of the absolute budget; the tail
/// bound is added to the reported error.
pub fn damped_momentum_integral<T, F>(mut f: F, tail: DampedTail, tol: Tolerance) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(tail.rate > 0.0) || !tail.rate.is_finite() {
        return Err(Error::Domain(format!(
            "damping rate must be positive and finite, got {}",
            tail.rate
        )));
    }
    if !(tail.bound >= 0.0) {
        return Err(Error::Domain(format!(
            "tail bound must be nonnegative, got {}",
            tail.bound
        )));
    }
    if tail.bound == 0.0 {
        return Ok(QuadratureResult {
            value: T::zero(),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let tail_budget = if tol.abs > 0.0 {
        0.1 * tol.abs
    } else {
        1e-300_f64.max(tail.bound * 1e-16)
    };
    let cutoff = tail.cutoff(tail_budget);
    let tail_error = tail.tail_bound(cutoff);
    let body_tol = Tolerance::new(0.9 * tol.abs, tol.rel);
    // panels of width ~2 keep the first pass from aliasing oscillations of period O(1)
    let panels = ((cutoff / 2.0).ceil() as usize).clamp(1, 4096);
    let body = if tail.even {
        let r = integrate_1d_panels(&mut f, Interval::new(0.0, cutoff), body_tol.split(2), panels);
        QuadratureResult {
            value: r.value * 2.0,
            error_estimate: 2.0 * r.error_estimate,
            ..r
        }
    } else {
        let half = body_tol.split(2);
        let lo = integrate_1d_panels(&mut f, Interval::new(-cutoff, 0.0), half, panels);
        let hi = integrate_1d_panels(&mut f, Interval::new(0.0, cutoff), half, panels);
        lo.combine(hi)
    };
    Ok(QuadratureResult {
        error_estimate: body.error_estimate + tail_error,
        ..body
    })
}

/// Integral over `[0, inf)` of an integrand with fast but not necessarily
/// exponential decay, summed over blocks `[0, p0], [p0, 2 p0], [2 p0, 4 p0], ...`.
///
/// Summation stops once a block contributes less than 1% of the target
/// after at least `min_blocks` blocks; the last block is added to the error
/// estimate as the tail. This is a decay heuristic, so callers must only use
/// it for integrands known to decay faster than any power.
pub fn decaying_half_line_integral<F>(mut f: F, p0: f64, min_blocks: usize, tol: Tolerance) -> QuadratureResult<f64>
where
    F: FnMut(f64) -> f64,
{
    const MAX_BLOCKS: usize = 48;
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    let block_tol = Tolerance::new(tol.abs / 16.0, tol.rel / 4.0);
    let (mut lo, mut hi) = (0.0, p0);
    for k in 0..MAX_BLOCKS {
        let r = integrate_1d_panels(&mut f, Interval::new(lo, hi), block_tol, 4);
        let size = r.value.abs() + r.error_estimate;
        total = total.combine(r);
        if k + 1 >= min_blocks && size < 0.01 * tol.target(total.value.abs()) {
            total.error_estimate += size;
            return total;
        }
        lo = hi;
        hi *= 2.0;
    }
    total.converged = false;
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line_blocks_integrate_gaussian() {
        let r = decaying_half_line_integral(|p| (-p * p).exp(), 0.5, 3, Tolerance::new(1e-13, 1e-12));
        assert!(r.converged);
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_integrates_to_two() {
        let r = damped_momentum_integral(
            |p: f64| (-p.abs()).exp(),
            DampedTail::new(1.0, 1.0),
            Tolerance::absolute(1e-11),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn damped_cosine_integrates_to_one() {
        let r = damped_momentum_integral(
            |p: f64| (-p.abs()).exp() * p.cos(),
            DampedTail::new(1.0, 1.0).even(),
            Tolerance::absolute(1e-11),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn nonpositive_rate_is_rejected() {
        let e = damped_momentum_integral(|p: f64| p, DampedTail::new(0.0, 1.0), Tolerance::absolute(1e-8));
        assert!(matches!(e, Err(Error::Domain(_))));
    }
}
