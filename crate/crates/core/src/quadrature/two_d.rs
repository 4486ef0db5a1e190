//! Two-dimensional integration over squares and rectangles.

use super::adaptive::{integrate_1d, Endpoint, Interval};
use super::{QuadratureResult, Tolerance};

/// Integrates `f(u, v)` over the square `[lo, hi]^2` when `f` is smooth off
/// the diagonal and at worst logarithmically singular on it.
///
/// The square is cut along `u = v` and each triangle is written in the
/// rotated coordinates `d = |u - v|`, `v` (or `u`). The outer `d` integral
/// carries a declared log weight at `d = 0`; the inner integral is regular.
pub fn integrate_2d_diag_log<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> QuadratureResult<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let floor = 4.0 * f64::EPSILON * lo.abs().max(hi.abs());
    integrate_2d_diag_offsets(
        // offsets below the resolution of u near v carry O(floor ln floor) weight
        |v, d| if d < floor { 0.0 } else { f(v + d, v) + f(v, v + d) },
        lo,
        hi,
        tol,
    )
}

/// As [`integrate_2d_diag_log`] for integrands with `f(u, v) = f(v, u)`;
/// only the lower triangle is evaluated.
pub fn integrate_2d_diag_log_symmetric<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> QuadratureResult<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let floor = 4.0 * f64::EPSILON * lo.abs().max(hi.abs());
    integrate_2d_diag_offsets(|v, d| if d < floor { 0.0 } else { 2.0 * f(v + d, v) }, lo, hi, tol)
}

/// `∫_0^{hi-lo} dd ∫_lo^{hi-d} g(v, d) dv`, the lower-triangle form of a
/// square integral in offset coordinates `d = u - v > 0`. The outer
/// integral carries a log weight at `d = 0`. Integrands that depend on
/// `u - v` should use `d` directly to keep full relative precision there.
pub fn integrate_2d_diag_offsets<G>(g: G, lo: f64, hi: f64, tol: Tolerance) -> QuadratureResult<f64>
where
    G: Fn(f64, f64) -> f64,
{
    let span = hi - lo;
    if span <= 0.0 {
        return QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let inner_tol = inner_tolerance(tol, span);
    let mut inner_error = 0.0_f64;
    let mut inner_evals = 0;
    let mut inner_ok = true;
    let outer = integrate_1d(
        |d: f64| {
            let r = integrate_1d(|v: f64| g(v, d), Interval::new(lo, hi - d), inner_tol);
            inner_error = inner_error.max(r.error_estimate);
            inner_evals += r.evaluations;
            inner_ok &= r.converged;
            r.value
        },
        Interval::new(0.0, span).with_left(Endpoint::Log),
        tol.scaled(0.5),
    );
    QuadratureResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_error * span,
        evaluations: outer.evaluations + inner_evals,
        converged: outer.converged && inner_ok,
    }
}

/// Inner integrals get a share of the absolute budget and a relative floor
/// near round-off, since a large inner value cannot be resolved to an
/// absolute target below its own rounding error.
fn inner_tolerance(tol: Tolerance, outer_width: f64) -> Tolerance {
    Tolerance::new(
        tol.abs / (20.0 * outer_width),
        (tol.rel / 20.0).max(64.0 * f64::EPSILON),
    )
}

/// Nested adaptive integration of a smooth integrand over `[a, b] x [c, d]`.
pub fn integrate_2d_tensor<F>(f: F, (a, b): (f64, f64), (c, d): (f64, f64), tol: Tolerance) -> QuadratureResult<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    let inner_tol = inner_tolerance(tol, width);
    let mut inner_error = 0.0_f64;
    let mut inner_evals = 0;
    let mut inner_ok = true;
    let outer = integrate_1d(
        |x: f64| {
            let r = integrate_1d(|y: f64| f(x, y), Interval::new(c, d), inner_tol);
            inner_error = inner_error.max(r.error_estimate);
            inner_evals += r.evaluations;
            inner_ok &= r.converged;
            r.value
        },
        Interval::new(a, b),
        tol.scaled(0.5),
    );
    QuadratureResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_error * width,
        evaluations: outer.evaluations + inner_evals,
        converged: outer.converged && inner_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_distance_over_unit_square() {
        // ∬ ln|u - v| = 2 ∫_0^1 (1 - d) ln d dd = -3/2
        let r = integrate_2d_diag_log(|u, v| (u - v).abs().ln(), 0.0, 1.0, Tolerance::absolute(1e-11));
        assert!(r.converged);
        assert!((r.value + 1.5).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn smooth_product_factorises() {
        let r = integrate_2d_diag_log(|u, v| u * v, 0.0, 2.0, Tolerance::absolute(1e-12));
        assert!((r.value - 4.0).abs() < 1e-11);
        let t = integrate_2d_tensor(|x, y| x * y, (0.0, 2.0), (0.0, 2.0), Tolerance::absolute(1e-12));
        assert!((t.value - 4.0).abs() < 1e-11);
    }

    #[test]
    fn transposition_invariance() {
        let f = |u: f64, v: f64| (u - v).abs().ln() * (1.0 + u * u * v);
        let g = |u: f64, v: f64| f(v, u);
        let a = integrate_2d_diag_log(f, 0.0, 1.0, Tolerance::absolute(1e-12));
        let b = integrate_2d_diag_log(g, 0.0, 1.0, Tolerance::absolute(1e-12));
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn symmetric_variant_matches_general() {
        let f = |u: f64, v: f64| (u - v).abs().ln() * (u + v).cos();
        let a = integrate_2d_diag_log(f, 0.5, 1.5, Tolerance::absolute(1e-12));
        let b = integrate_2d_diag_log_symmetric(f, 0.5, 1.5, Tolerance::absolute(1e-12));
        assert!((a.value - b.value).abs() < 1e-11);
    }
}
