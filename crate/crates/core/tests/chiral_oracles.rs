use renyi_core::chiral::*;
use renyi_core::testfn::{HalfLineTestFunction, SmoothFunction};

fn standard() -> HalfLineTestFunction {
    HalfLineTestFunction::bump(0.5, 1.5).unwrap()
}

fn s(f: &HalfLineTestFunction, beta: f64, alpha: f64) -> f64 {
    petz_renyi_chiral(f, beta, alpha, DEFAULT_TOLERANCE).unwrap().value
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn frozen_reference_values() {
    // reproduced by the log form, the sinh^-2 form and the alpha -> 1 ladder
    let f = standard();
    assert!(rel(s(&f, 1.0, 0.5), 1.502_899_760_737_188_5e-4) < 1e-8);
    let s1 = relative_entropy_chiral(&f, 1.0, DEFAULT_TOLERANCE).unwrap().value;
    assert!(rel(s1, 5.453_367_809_303_186e-4) < 1e-8);
}

#[test]
fn endpoint_and_monotone_curve() {
    let f = standard();
    assert_eq!(s(&f, 1.0, 0.0), 0.0);
    let s1 = relative_entropy_chiral(&f, 1.0, DEFAULT_TOLERANCE).unwrap();
    let mut prev = 0.0;
    for k in 1..20 {
        let e = petz_renyi_chiral(&f, 1.0, k as f64 / 20.0, DEFAULT_TOLERANCE).unwrap();
        assert!(e.value >= prev - e.error_estimate);
        assert!(e.value <= s1.value + e.error_estimate + s1.error_estimate);
        prev = e.value;
    }
}

#[test]
fn alternative_form_agrees() {
    let f = standard();
    for (beta, alpha) in [(1.0, 0.5), (0.5, 0.2), (3.0, 0.9)] {
        let a = s(&f, beta, alpha);
        let b = petz_renyi_chiral_alternative(&f, beta, alpha, DEFAULT_TOLERANCE)
            .unwrap()
            .value;
        assert!(rel(a, b) < 1e-8, "beta {beta} alpha {alpha}: {a} vs {b}");
    }
}

#[test]
fn alpha_limit_reaches_closed_form() {
    let f = standard();
    let lim = petz_renyi_chiral_alpha_limit(&f, 1.0, 3..=7, DEFAULT_TOLERANCE).unwrap();
    let s1 = relative_entropy_chiral(&f, 1.0, DEFAULT_TOLERANCE).unwrap().value;
    assert!(rel(lim.value, s1) < 1e-4, "{} vs {s1}", lim.value);
}

#[test]
fn first_correction_three_ways() {
    let f = standard();
    let fc = alpha_derivative_at_one(&f, 1.0, DEFAULT_TOLERANCE).unwrap().value;
    assert!(fc >= 0.0);
    assert!(rel(fc, 2.034_212_320_993_218e-3) < 1e-8);
    let ladder = alpha_derivative_at_one_epsilon_ladder(&f, 1.0, &[1e-3, 1e-4, 1e-5], DEFAULT_TOLERANCE).unwrap();
    assert!(rel(ladder.value, fc) < 1e-4, "{} vs {fc}", ladder.value);
    // secant through alpha = 0.985 and the closed-form endpoint
    let s1 = relative_entropy_chiral(&f, 1.0, DEFAULT_TOLERANCE).unwrap().value;
    let slope = (s1 - s(&f, 1.0, 0.985)) / 0.015;
    assert!(rel(slope, fc) < 0.05, "{slope} vs {fc}");
}

#[test]
fn first_correction_at_high_temperature() {
    // the damping factor is evaluated only on the support, never at u < 0
    let f = standard();
    for beta in [1e-3, 1e-2] {
        let fc = alpha_derivative_at_one(&f, beta, DEFAULT_TOLERANCE).unwrap().value;
        let s1 = relative_entropy_chiral(&f, beta, DEFAULT_TOLERANCE).unwrap().value;
        assert!(fc.is_finite() && fc > 0.0 && fc < 2.0 * s1, "beta {beta}: {fc} vs {s1}");
    }
}

#[test]
fn beta_derivative_matches_finite_difference() {
    let f = standard();
    for beta in [0.5, 1.0, 4.0] {
        let d = beta_derivative_relative_entropy(&f, beta, DEFAULT_TOLERANCE)
            .unwrap()
            .value;
        let h = 1e-4 * beta;
        let up = relative_entropy_chiral(&f, beta + h, DEFAULT_TOLERANCE).unwrap().value;
        let down = relative_entropy_chiral(&f, beta - h, DEFAULT_TOLERANCE).unwrap().value;
        let fd = (up - down) / (2.0 * h);
        assert!(rel(d, fd) < 1e-6, "beta {beta}: {d} vs {fd}");
    }
}

#[test]
fn temperature_limits() {
    let f = standard();
    for beta in [0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0] {
        assert!(
            beta_derivative_relative_entropy(&f, beta, DEFAULT_TOLERANCE)
                .unwrap()
                .value
                >= 0.0
        );
    }
    let zero_t = zero_temperature_entropy(&f, DEFAULT_TOLERANCE).unwrap().value;
    let cold = relative_entropy_chiral(&f, 1e3, DEFAULT_TOLERANCE).unwrap().value;
    assert!(rel(cold, zero_t) < 0.01, "{cold} vs {zero_t}");
    let report = infinite_temperature_check(&f, 0.5, DEFAULT_TOLERANCE).unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.entropy.value < 1e-2 * zero_t);
}

#[test]
fn quadratic_in_amplitude_and_dilation_invariant() {
    let f = standard();
    let doubled = s(&standard().scaled(2.0), 1.0, 0.6);
    assert!(rel(doubled, 4.0 * s(&f, 1.0, 0.6)) < 1e-9);
    // u -> 2u together with beta -> 2 beta
    let gauss = |c: f64, w: f64| HalfLineTestFunction::new(SmoothFunction::gauss_bump(c, w).unwrap()).unwrap();
    let base = s(&gauss(1.0, 0.5), 1.0, 0.6);
    let dilated = s(&gauss(2.0, 1.0), 2.0, 0.6);
    assert!(rel(dilated, base) < 1e-8, "{dilated} vs {base}");
}

#[test]
fn kernel_and_gram_checks() {
    for (u, v) in [(0.3, 1.7), (2.0, 0.1), (5.0, 4.5)] {
        for beta in [0.5, 1.0, 3.0] {
            assert!(kms_residual(u, v, beta, 1e-3) <= 1e-12);
        }
    }
    let hs = vec![
        SmoothFunction::bump(0.2, 1.0).unwrap(),
        SmoothFunction::gauss_bump(1.0, 0.4).unwrap(),
        SmoothFunction::poly_bump(0.5, 2.5, 3).unwrap(),
        SmoothFunction::bump(1.5, 2.0).unwrap(),
    ];
    for beta in [0.5, 2.0] {
        let (re, im) = thermal_gram_matrix(&hs, beta, DEFAULT_TOLERANCE).unwrap();
        assert!(hermitian_min_eigenvalue(&re, &im) >= -1e-10);
    }
}
