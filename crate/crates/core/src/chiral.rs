//! Free chiral current on the half light-ray `u >= 0` in the KMS state at
//! inverse temperature `beta`.
//!
//! With `x = 2 pi u / beta`, `y = 2 pi v / beta` and `s = sin(pi alpha)` the
//! real part of the symmetrized logarithmic kernel of the Renyi entropy is
//!
//! `K(u, v) = 1/2 ln(1 + s^2 (1 - e^{-x})(1 - e^{-y}) / sinh^2((x - y) / 2))`
//!
//! and `S_alpha = (1 / (4 pi (1 - alpha))) ∬ K f'(u) f'(v)`. Its imaginary
//! part cancels pointwise between `(u, v)` and `(v, u)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{
    composite_kronrod, integrate_1d, integrate_2d_diag_offsets, richardson_limit, Extrapolated, ExtrapolationLadder,
    Interval, Tolerance,
};
use crate::testfn::{HalfLineTestFunction, SmoothFunction};
use crate::Estimate;

/// Default accuracy request for chiral-current integrals.
pub const DEFAULT_TOLERANCE: Tolerance = Tolerance { abs: 1e-15, rel: 1e-10 };
/// Panels of the fixed rule used for autocorrelation integrals.
const AUTOCORRELATION_PANELS: usize = 48;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// `1 - e^{-x}` without cancellation.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Thermal two-point kernel `-(pi / (4 beta^2)) csch^2(pi z / beta)` at a
/// complex separation `z`.
pub fn thermal_kernel(z: Complex64, beta: f64) -> Complex64 {
    let w = z * (PI / beta);
    let sh = w.sinh();
    -(PI / (4.0 * beta * beta)) / (sh * sh)
}

/// `omega_2(u, v)` regularized as `u - v - i epsilon`.
pub fn thermal_two_point(u: f64, v: f64, beta: f64, epsilon: f64) -> Result<Complex64> {
    check_beta(beta)?;
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(thermal_kernel(Complex64::new(u - v, -epsilon), beta))
}

/// `|omega_2(u - i beta, v) - omega_2(v, u)|` relative to `max(1, |omega_2|)`,
/// both regularized with the same `epsilon`.
pub fn kms_residual(u: f64, v: f64, beta: f64, epsilon: f64) -> f64 {
    // the continuation of u - v - i0 into the strip lands at u - v + i epsilon - i beta
    let shifted = thermal_kernel(Complex64::new(u - v, epsilon - beta), beta);
    let swapped = thermal_kernel(Complex64::new(v - u, -epsilon), beta);
    (shifted - swapped).norm() / swapped.norm().max(1.0)
}

/// The modular flow `L(t, u) = (beta / 2 pi) ln(1 + e^{2 pi t}(e^{2 pi u / beta} - 1))`.
pub fn modular_flow_l(t: f64, u: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("L(t, u) needs u >= 0, got {u}")));
    }
    let x = 2.0 * PI * u / beta;
    // y = ln(e^{2 pi t}(e^x - 1)), evaluated without overflow
    let ln_expm1 = if x > 30.0 {
        x + one_minus_exp(x).ln()
    } else {
        x.exp_m1().ln()
    };
    let y = 2.0 * PI * t + ln_expm1;
    let ln_one_plus = if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    };
    Ok(beta / (2.0 * PI) * ln_one_plus)
}

/// Pointwise real log kernel `K(u, v)` of the Renyi entropy.
pub fn log_kernel(u: f64, v: f64, beta: f64, alpha: f64) -> f64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    kernel_at_offset(lo, hi - lo, beta, (PI * alpha).sin())
}

/// `K(v + d, v)` for `d > 0`, with `d` passed exactly.
fn kernel_at_offset(v: f64, d: f64, beta: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let k = 2.0 * PI / beta;
    let p = one_minus_exp(k * (v + d)) * one_minus_exp(k * v);
    let q = (PI * d / beta).sinh();
    if q < 1.0 {
        0.5 * (q * q + s * s * p).ln() - q.ln()
    } else {
        0.5 * (s * s * p / (q * q)).ln_1p()
    }
}

/// Imaginary part of the symmetrized principal-branch integrand at `(v + d, v)`.
fn imaginary_residual_at_offset(v: f64, d: f64, beta: f64, alpha: f64) -> f64 {
    let k = 2.0 * PI / beta;
    let (c, s) = ((PI * alpha).cos(), (PI * alpha).sin());
    let a = (k * (v + d)).exp();
    let b = (k * v).exp();
    if !a.is_finite() {
        return 0.0;
    }
    let forward = Complex64::new(-c * (a - b), -s * (a + b - 2.0)).arg();
    let backward = Complex64::new(-c * (b - a), -s * (a + b - 2.0)).arg();
    // ln(A - B - i0) contributes arg 0 for A > B and -pi for A < B
    forward + backward + PI
}

fn check_open_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    Ok(())
}

/// Petz-Renyi relative entropy `S_alpha(W(f) Omega || Omega)` for
/// `alpha` in `[0, 1)` (the value at 0 is exactly 0).
///
/// The square is split along the diagonal and integrated in the offset
/// `d = u - v` with a log-weighted rule at `d = 0`. The reported error
/// includes the quadrature estimate, the integrated bound on the
/// imaginary residual and the test function's own uncertainty.
pub fn petz_renyi_chiral(f: &HalfLineTestFunction, beta: f64, alpha: f64, tol: Tolerance) -> Result<Estimate> {
    check_beta(beta)?;
    check_open_alpha(alpha)?;
    let Some((a, b)) = f.support() else {
        return Ok(Estimate::exact(0.0));
    };
    if alpha == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let s = (PI * alpha).sin();
    let h = 1.0 - alpha;
    let prefactor = 1.0 / (4.0 * PI * h);
    let max_imag = std::cell::Cell::new(0.0f64);
    let inner_tol = Tolerance::new(tol.abs / prefactor, tol.rel);
    let r = integrate_2d_diag_offsets(
        |v, d| {
            let w = f.derivative(v + d) * f.derivative(v);
            if w == 0.0 {
                return 0.0;
            }
            let im = imaginary_residual_at_offset(v, d, beta, alpha);
            max_imag.set(max_imag.get().max((im * w).abs()));
            2.0 * kernel_at_offset(v, d, beta, s) * w
        },
        a,
        b,
        inner_tol,
    );
    let value = prefactor * r.value;
    let imag_bound = prefactor * max_imag.get() * (b - a) * (b - a);
    let error = prefactor * r.error_estimate + imag_bound + 2.0 * f.function().relative_uncertainty() * value.abs();
    if !r.converged {
        return Err(Error::NonConvergence {
            value,
            error_estimate: error,
        });
    }
    Ok(Estimate::new(value, error))
}

/// Integral of the symmetrized imaginary part of the principal-branch
/// integrand; vanishes identically in exact arithmetic.
pub fn imaginary_residual_chiral(f: &HalfLineTestFunction, beta: f64, alpha: f64, tol: Tolerance) -> Result<Estimate> {
    check_beta(beta)?;
    check_open_alpha(alpha)?;
    let Some((a, b)) = f.support() else {
        return Ok(Estimate::exact(0.0));
    };
    let prefactor = 1.0 / (4.0 * PI * (1.0 - alpha));
    let r = integrate_2d_diag_offsets(
        |v, d| imaginary_residual_at_offset(v, d, beta, alpha) * f.derivative(v + d) * f.derivative(v),
        a,
        b,
        tol,
    )
    .into_result()?;
    Ok(Estimate::new(prefactor * r.value, prefactor * r.error_estimate))
}

/// `∫ w(u) f'(u)^2 du` over the support of `f`.
fn weighted_energy(f: &SmoothFunction, weight: impl Fn(f64) -> f64, tol: Tolerance) -> Result<Estimate> {
    let Some((a, b)) = f.support() else {
        return Ok(Estimate::exact(0.0));
    };
    let knots = f.breakpoints();
    let mut value = 0.0;
    let mut error = 0.0;
    let pieces = knots.len().saturating_sub(1).max(1);
    for w in knots
        .windows(2)
        .map(|w| (w[0], w[1]))
        .chain((knots.len() < 2).then_some((a, b)))
    {
        let r = integrate_1d(
            |u: f64| {
                let d = f.derivative(u);
                weight(u) * d * d
            },
            Interval::new(w.0, w.1),
            tol.split(pieces),
        )
        .into_result()?;
        value += r.value;
        error += r.error_estimate;
    }
    error += 2.0 * f.relative_uncertainty() * value.abs();
    Ok(Estimate::new(value, error))
}

/// Relative entropy `(beta / 4) ∫ (1 - e^{-2 pi u / beta}) f'(u)^2 du`.
pub fn relative_entropy_chiral(f: &HalfLineTestFunction, beta: f64, tol: Tolerance) -> Result<Estimate> {
    check_beta(beta)?;
    let k = 2.0 * PI / beta;
    let e = weighted_energy(f.function(), |u| one_minus_exp(k * u), tol.scaled(4.0 / beta))?;
    Ok(Estimate::new(0.25 * beta * e.value, 0.25 * beta * e.error_estimate))
}

/// `1 - e^{-x} - x e^{-x}`, nonnegative, with a series near 0.
fn beta_weight(x: f64) -> f64 {
    if x < 0.1 {
        // sum_{k >= 2} (-1)^k (k - 1) x^k / k!
        let mut term = x * x / 2.0;
        let mut sum = 0.0;
        for k in 2..20 {
            sum += (k - 1) as f64 * term;
            term *= -x / (k + 1) as f64;
        }
        sum
    } else {
        one_minus_exp(x) - x * (-x).exp()
    }
}

/// `dS/dbeta = (1/4) ∫ (1 - e^{-x} - x e^{-x}) f'(u)^2 du` with `x = 2 pi u / beta`.
pub fn beta_derivative_relative_entropy(f: &HalfLineTestFunction, beta: f64, tol: Tolerance) -> Result<Estimate> {
    check_beta(beta)?;
    let k = 2.0 * PI / beta;
    let e = weighted_energy(f.function(), |u| beta_weight(k * u), tol.scaled(4.0))?;
    Ok(Estimate::new(0.25 * e.value, 0.25 * e.error_estimate))
}

/// The `beta -> inf` limit `(1/4) ∫ 2 pi u f'(u)^2 du`.
pub fn zero_temperature_entropy(f: &HalfLineTestFunction, tol: Tolerance) -> Result<Estimate> {
    let e = weighted_energy(f.function(), |u| 2.0 * PI * u, tol.scaled(4.0))?;
    Ok(Estimate::new(0.25 * e.value, 0.25 * e.error_estimate))
}

/// Power series of `(xi^2 / sinh^2 xi - 1) / xi^2`.
fn csch_ratio_defect(xi: f64) -> f64 {
    if xi.abs() < 1e-2 {
        let x2 = xi * xi;
        -1.0 / 3.0 + x2 * (1.0 / 15.0 + x2 * (-2.0 / 189.0 + x2 / 675.0))
    } else if xi.abs() > 350.0 {
        -1.0 / (xi * xi)
    } else {
        let sh = xi.sinh();
        (1.0 / (sh * sh) - 1.0 / (xi * xi)) * 1.0
    }
}

/// `xi^2 / sinh^2 xi`.
fn csch_ratio(xi: f64) -> f64 {
    if xi.abs() < 1e-2 {
        1.0 + xi * xi * csch_ratio_defect(xi)
    } else if xi.abs() > 350.0 {
        0.0
    } else {
        let r = xi / xi.sinh();
        r * r
    }
}

/// Hadamard finite part `Pf ∬ h1(u) h2(v) csch^2(pi (u - v) / beta) du dv`
/// for smooth compactly supported `h1`, `h2`.
///
/// With `H(d) = ∫ h1(σ + d/2) h2(σ - d/2) dσ` symmetrized in `d`, the
/// finite part over `[-D, D]` is `2 ∫_0^D (φ(d) - φ(0)) / d^2 - 2 φ(0) / D`
/// for `φ = H p`, `p(d) = (πd/β)^2 csch^2(πd/β)`. The difference
/// `H(0) - H(d)` equals `(1/2) ∫ Δh1 Δh2 dσ` with `Δh = h(σ + d/2) - h(σ - d/2)`,
/// which avoids cancellation at small `d`.
pub fn csch2_finite_part<F1, F2>(h1: F1, h2: F2, hull: (f64, f64), beta: f64, tol: Tolerance) -> Result<Estimate>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    check_beta(beta)?;
    let (lo, hi) = hull;
    let span = hi - lo;
    if !(span > 0.0) {
        return Ok(Estimate::exact(0.0));
    }
    let h0 = integrate_1d(|x: f64| h1(x) * h2(x), Interval::new(lo, hi), tol.scaled(0.1)).into_result()?;
    let k = PI / beta;
    // (H(0) - H(d)) / d^2 by a fixed rule so that it is smooth in d
    let defect_quotient = |d: f64, panels: usize| -> f64 {
        let e = 0.5 * d;
        composite_kronrod(lo - e, hi + e, panels)
            .into_iter()
            .map(|(x, w)| w * (h1(x + e) - h1(x - e)) * (h2(x + e) - h2(x - e)))
            .sum::<f64>()
            * 0.5
            / (d * d)
    };
    let outer = integrate_1d(
        |d: f64| {
            -defect_quotient(d, AUTOCORRELATION_PANELS) * csch_ratio(k * d)
                + h0.value * k * k * csch_ratio_defect(k * d)
        },
        Interval::new(0.0, span),
        tol.scaled(0.1),
    )
    .into_result()?;
    let pf = 2.0 * outer.value - 2.0 * h0.value / span;
    // fixed-rule error, sampled where the autocorrelation is widest
    let probe = 0.5 * span;
    let rule_error =
        (defect_quotient(probe, AUTOCORRELATION_PANELS) - defect_quotient(probe, AUTOCORRELATION_PANELS / 2)).abs();
    let error = 2.0 * outer.error_estimate
        + 2.0 * h0.error_estimate * (1.0 / span + k * k * span / 3.0)
        + 2.0 * span * rule_error;
    let scale = 1.0 / (k * k);
    Ok(Estimate::new(scale * pf, scale * error))
}

/// `f'(u) (1 - e^{-k u})`, exactly zero outside `hull`. The guard matters:
/// for `u < 0` the exponential overflows at small `beta`.
fn damped_derivative(f: &HalfLineTestFunction, k: f64, hull: (f64, f64)) -> impl Fn(f64) -> f64 + '_ {
    move |u| {
        if u <= hull.0 || u >= hull.1 {
            0.0
        } else {
            f.derivative(u) * one_minus_exp(k * u)
        }
    }
}

/// First correction `lim_{alpha -> 1} dS_alpha / d alpha`
/// `= (beta^2 / 2) ∬ g(u) g(v) omega_2(u, v)` with `g = f' (1 - e^{-2 pi u / beta})`,
/// evaluated as `-(pi / 8)` times the finite part of the `csch^2` form.
pub fn alpha_derivative_at_one(f: &HalfLineTestFunction, beta: f64, tol: Tolerance) -> Result<Estimate> {
    check_beta(beta)?;
    let Some(hull) = f.support() else {
        return Ok(Estimate::exact(0.0));
    };
    let k = 2.0 * PI / beta;
    let g = damped_derivative(f, k, hull);
    let pf = csch2_finite_part(&g, &g, hull, beta, tol.scaled(8.0 / PI))?;
    let value = -PI / 8.0 * pf.value;
    let error = PI / 8.0 * pf.error_estimate + 2.0 * f.function().relative_uncertainty() * value.abs();
    Ok(Estimate::new(value, error))
}

/// The first correction via `epsilon`-regularized kernels at the given
/// `epsilons` (strictly decreasing, at least 3), extrapolated to 0.
pub fn alpha_derivative_at_one_epsilon_ladder(
    f: &HalfLineTestFunction,
    beta: f64,
    epsilons: &[f64],
    tol: Tolerance,
) -> Result<Extrapolated> {
    check_beta(beta)?;
    let Some((a, b)) = f.support() else {
        return Ok(Extrapolated {
            value: 0.0,
            spread: 0.0,
            non_monotone_tail: false,
        });
    };
    let span = b - a;
    let k = 2.0 * PI / beta;
    let g = damped_derivative(f, k, (a, b));
    let autocorrelation = |d: f64| -> f64 {
        let e = 0.5 * d;
        composite_kronrod(a - e, b + e, AUTOCORRELATION_PANELS)
            .into_iter()
            .map(|(x, w)| w * g(x + e) * g(x - e))
            .sum()
    };
    let ladder = ExtrapolationLadder::sample(epsilons, |eps| {
        // Re ∫ H(d) csch^2(pi (d - i eps) / beta) over d in (-D, D), even in d
        let mut total = 0.0;
        let cuts = [0.0, eps, 10.0 * eps, 100.0 * eps, span];
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0].min(span), w[1].min(span));
            if hi <= lo {
                continue;
            }
            let r = integrate_1d(
                |d: f64| {
                    let z = Complex64::new(d, -eps) * (PI / beta);
                    let sh = z.sinh();
                    autocorrelation(d) * (1.0 / (sh * sh)).re
                },
                Interval::new(lo, hi),
                tol,
            );
            total += r.value;
        }
        Ok::<f64, Error>(-PI / 8.0 * 2.0 * total)
    })?;
    Ok(richardson_limit(&ladder))
}

/// Alternative form of `S_alpha` obtained by integrating by parts: the
/// regular `Z^{-2}` kernel against `f f` minus the `csch^2` finite part.
/// Used as an independent check of [`petz_renyi_chiral`].
pub fn petz_renyi_chiral_alternative(
    f: &HalfLineTestFunction,
    beta: f64,
    alpha: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    check_beta(beta)?;
    check_open_alpha(alpha)?;
    let Some((a, b)) = f.support() else {
        return Ok(Estimate::exact(0.0));
    };
    if alpha == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let k = PI / beta;
    let regular = crate::quadrature::integrate_2d_tensor(
        |u, v| alternative_regular_kernel(u, v, beta, alpha) * f.value(u) * f.value(v),
        (a, b),
        (a, b),
        tol.scaled(0.1),
    )
    .into_result()?;
    let pf = csch2_finite_part(|u| f.value(u), |u| f.value(u), (a, b), beta, tol.scaled(0.1))?;
    let prefactor = k * k / (4.0 * PI * (1.0 - alpha));
    Ok(Estimate::new(
        prefactor * (regular.value - pf.value),
        prefactor * (regular.error_estimate + pf.error_estimate),
    ))
}

/// `Re Z^{-2}` with `Z = sinh(pi (u - v) / beta + i pi alpha) - i sin(pi alpha) e^{-pi (u + v) / beta}`.
pub fn alternative_regular_kernel(u: f64, v: f64, beta: f64, alpha: f64) -> f64 {
    let k = PI / beta;
    let z =
        Complex64::new(k * (u - v), PI * alpha).sinh() - Complex64::new(0.0, (PI * alpha).sin() * (-k * (u + v)).exp());
    (1.0 / (z * z)).re
}

/// Richardson extrapolation of `S_alpha` along `alpha = 1 - 2^{-k}`, `k` in `ks`.
pub fn petz_renyi_chiral_alpha_limit(
    f: &HalfLineTestFunction,
    beta: f64,
    ks: std::ops::RangeInclusive<i32>,
    tol: Tolerance,
) -> Result<Extrapolated> {
    let hs: Vec<f64> = ks.map(|k| 2f64.powi(-k)).collect();
    let ladder = ExtrapolationLadder::sample(&hs, |h| {
        Ok::<f64, Error>(petz_renyi_chiral(f, beta, 1.0 - h, tol)?.value)
    })?;
    Ok(richardson_limit(&ladder))
}

/// Outcome of [`infinite_temperature_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteTemperatureReport {
    /// `S_alpha` at `beta = 1e-3`.
    pub entropy: Estimate,
    pub zero_temperature: Estimate,
    /// `|L(1, 0.7) - 0.7|` at `beta = 1e-6`.
    pub flow_deviation: f64,
}

impl InfiniteTemperatureReport {
    /// The entropy is below 1% of the zero-temperature value and the flow
    /// is the identity to `1e-5`.
    pub fn passed(&self) -> bool {
        self.entropy.value.abs() < 1e-2 * self.zero_temperature.value.abs().max(f64::MIN_POSITIVE)
            && self.flow_deviation < 1e-5
            || (self.zero_temperature.value == 0.0 && self.entropy.value == 0.0 && self.flow_deviation < 1e-5)
    }
}

/// Evaluates the `beta -> 0` behaviour: vanishing entropy and trivial modular flow.
pub fn infinite_temperature_check(
    f: &HalfLineTestFunction,
    alpha: f64,
    tol: Tolerance,
) -> Result<InfiniteTemperatureReport> {
    let entropy = petz_renyi_chiral(f, 1e-3, alpha, tol)?;
    let zero_temperature = zero_temperature_entropy(f, tol)?;
    let flow_deviation = (modular_flow_l(1.0, 0.7, 1e-6)? - 0.7).abs();
    Ok(InfiniteTemperatureReport {
        entropy,
        zero_temperature,
        flow_deviation,
    })
}

/// Gram matrix `G_ij = ∬ h_i(u) h_j(v) omega_2(u, v)` of real smearing
/// functions, returned as `(Re G, Im G)`. The real part is the `csch^2`
/// finite part; the imaginary part is the `i pi delta'` term of the
/// boundary value, `(1/4) ∫ h_i h_j'`.
pub fn thermal_gram_matrix(hs: &[SmoothFunction], beta: f64, tol: Tolerance) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_beta(beta)?;
    let n = hs.len();
    let mut re = DMatrix::zeros(n, n);
    let mut im = DMatrix::zeros(n, n);
    let real_entry = |i: usize, j: usize, hull: (f64, f64)| -> Result<f64> {
        let pf = csch2_finite_part(|x| hs[i].value(x), |x| hs[j].value(x), hull, beta, tol)?;
        Ok(-PI / (4.0 * beta * beta) * pf.value)
    };
    for i in 0..n {
        if let Some(si) = hs[i].support() {
            re[(i, i)] = real_entry(i, i, si)?;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (Some(si), Some(sj)) = (hs[i].support(), hs[j].support()) else {
                continue;
            };
            let hull = (si.0.min(sj.0), si.1.max(sj.1));
            let g = real_entry(i, j, hull)?;
            re[(i, j)] = g;
            re[(j, i)] = g;
            // |G_ij| <= sqrt(G_ii G_jj) sets the scale of an entry that may vanish
            let floor = tol.rel * (re[(i, i)] * re[(j, j)]).abs().sqrt();
            let entry_tol = Tolerance::new(tol.abs.max(floor), tol.rel);
            let cross = integrate_1d(
                |x: f64| hs[i].value(x) * hs[j].derivative(x),
                Interval::new(hull.0, hull.1),
                entry_tol,
            )
            .into_result()?;
            im[(i, j)] = 0.25 * cross.value;
            im[(j, i)] = -0.25 * cross.value;
        }
    }
    // the diagonal of Im G is (1/4) ∫ h h' = 0 for compact support
    Ok((re, im))
}

/// Smallest eigenvalue of the Hermitian matrix `re + i im`.
pub fn hermitian_min_eigenvalue(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let n = re.nrows();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(re);
    big.view_mut((n, n), (n, n)).copy_from(re);
    big.view_mut((0, n), (n, n)).copy_from(&(-im));
    big.view_mut((n, 0), (n, n)).copy_from(im);
    big.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bump() -> HalfLineTestFunction {
        HalfLineTestFunction::bump(0.5, 1.5).unwrap()
    }

    #[test]
    fn flow_identities() {
        for u in [0.0, 0.5, 3.0] {
            assert!((modular_flow_l(0.0, u, 1.0).unwrap() - u).abs() < 1e-15);
        }
        assert_eq!(modular_flow_l(2.3, 0.0, 1.0).unwrap(), 0.0);
        assert!(modular_flow_l(0.0, -0.1, 1.0).is_err());
        assert!((modular_flow_l(1.0, 0.7, 1e-6).unwrap() - 0.7).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn flow_group_law(t in -2.0f64..2.0, s in -2.0f64..2.0, u in 0.0f64..5.0, beta in 0.1f64..10.0) {
            let lhs = modular_flow_l(t, modular_flow_l(s, u, beta).unwrap(), beta).unwrap();
            let rhs = modular_flow_l(t + s, u, beta).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn kms(u in 0.0f64..3.0, v in 0.0f64..3.0, beta in 0.5f64..4.0) {
            prop_assert!(kms_residual(u, v, beta, 0.1 * beta) <= 1e-12);
        }

        #[test]
        fn kernel_symmetry(u in 0.1f64..3.0, v in 0.1f64..3.0, alpha in 0.01f64..0.99) {
            prop_assume!((u - v).abs() > 1e-6);
            prop_assert_eq!(log_kernel(u, v, 1.0, alpha), log_kernel(v, u, 1.0, alpha));
            prop_assert!(imaginary_residual_at_offset(u.min(v), (u - v).abs(), 1.0, alpha).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_example() {
        let w = thermal_two_point(0.5, 0.0, 1.0, 1e-12).unwrap();
        let expect = -PI / 4.0 / (PI / 2.0).sinh().powi(2);
        assert!((w.re - expect).abs() < 1e-12 && w.im.abs() < 1e-9);
    }

    #[test]
    fn alternative_kernel_is_mixed_derivative_of_log_kernel() {
        let (beta, alpha) = (1.0, 0.4);
        let k = PI / beta;
        for (u, v) in [(0.6, 1.3), (1.4, 0.7), (0.9, 1.1)] {
            let h = 1e-4;
            let mixed = (log_kernel(u + h, v + h, beta, alpha)
                - log_kernel(u + h, v - h, beta, alpha)
                - log_kernel(u - h, v + h, beta, alpha)
                + log_kernel(u - h, v - h, beta, alpha))
                / (4.0 * h * h);
            let sinh2 = (k * (u - v)).sinh().powi(2);
            let alt = k * k * (alternative_regular_kernel(u, v, beta, alpha) - 1.0 / sinh2);
            assert!((mixed - alt).abs() < 1e-5 * alt.abs().max(1.0), "{mixed} vs {alt}");
        }
    }

    #[test]
    fn zero_function_gives_zero() {
        let z = HalfLineTestFunction::zero();
        let t = DEFAULT_TOLERANCE;
        assert_eq!(petz_renyi_chiral(&z, 1.0, 0.5, t).unwrap().value, 0.0);
        assert_eq!(relative_entropy_chiral(&z, 1.0, t).unwrap().value, 0.0);
        assert_eq!(alpha_derivative_at_one(&z, 1.0, t).unwrap().value, 0.0);
        assert_eq!(beta_derivative_relative_entropy(&z, 1.0, t).unwrap().value, 0.0);
        assert_eq!(zero_temperature_entropy(&z, t).unwrap().value, 0.0);
    }

    #[test]
    fn beta_weight_series_matches_direct_form() {
        for x in [0.02, 0.05, 0.099, 0.1, 0.2] {
            let direct = one_minus_exp(x) - x * (-x).exp();
            let series = {
                let mut term = x * x / 2.0;
                let mut sum = 0.0;
                for k in 2..20 {
                    sum += (k - 1) as f64 * term;
                    term *= -x / (k + 1) as f64;
                }
                sum
            };
            assert!((direct - series).abs() < 1e-13 * series);
        }
    }

    #[test]
    fn finite_part_of_gaussian_pair_is_scale_covariant() {
        // u -> c u with beta -> c beta scales the measure by c^2 and leaves the kernel fixed
        let f = |x: f64| (-(x - 1.0).powi(2) * 20.0).exp();
        let a = csch2_finite_part(f, f, (0.0, 2.0), 1.0, DEFAULT_TOLERANCE).unwrap();
        let g = |x: f64| (-(x / 2.0 - 1.0).powi(2) * 20.0).exp();
        let b = csch2_finite_part(g, g, (0.0, 4.0), 2.0, DEFAULT_TOLERANCE).unwrap();
        assert!(
            (b.value - 4.0 * a.value).abs() < 1e-8 * a.value.abs(),
            "{} {}",
            a.value,
            b.value
        );
        let _ = bump();
    }
}
