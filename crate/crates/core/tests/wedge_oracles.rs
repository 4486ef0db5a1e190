use std::f64::consts::PI;

use renyi_core::quadrature::{integrate_2d_diag_log, Tolerance};
use renyi_core::testfn::SmoothFunction;
use renyi_core::wedge::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `K_alpha` at equal times from Bessel functions only:
/// `(K_0(m sqrt(s^2 (x + y)^2 + c^2 (x - y)^2)) - K_0(m |x - y|)) / (pi (alpha - 1))`.
fn closed_form_kernel(x: f64, y: f64, alpha: f64, mass: f64) -> f64 {
    let h = 1.0 - alpha;
    let (c, s) = ((PI * h).cos(), (PI * h).sin());
    let (sum, d) = (x + y, (x - y).abs());
    let continued = bessel_k(0, mass * (s * s * sum * sum + c * c * d * d).sqrt()).unwrap();
    (continued - bessel_k(0, mass * d).unwrap()) / (PI * (alpha - 1.0))
}

#[test]
fn position_space_route_matches_momentum_assembly() {
    // with phi = 0 the entropy is (1/2) ∬ pi(x) pi(y) K_alpha(x, y)
    let pi = SmoothFunction::gauss_bump(1.0, 0.5).unwrap();
    let data = WedgeCauchyData::new(SmoothFunction::zero(), pi.clone(), 2.0).unwrap();
    for alpha in [0.3, 0.7] {
        let momentum = petz_renyi_wedge(&data, alpha, DEFAULT_TOLERANCE).unwrap();
        let position = integrate_2d_diag_log(
            |x, y| 0.5 * pi.value(x) * pi.value(y) * closed_form_kernel(x, y, alpha, 2.0),
            0.5,
            1.5,
            Tolerance::new(1e-12, 1e-9),
        );
        assert!(position.converged);
        assert!(
            rel(position.value, momentum.value) < 1e-7,
            "alpha {alpha}: {} vs {}",
            position.value,
            momentum.value
        );
    }
}

#[test]
fn pointwise_kernel_matches_closed_form() {
    for (x, y) in [(0.5, 1.2), (2.0, 0.3), (1.0, 1.1)] {
        for alpha in [0.2, 0.6, 0.95] {
            let k = k_alpha_equal_time(x, y, alpha, 1.0, KernelPart::Value, DEFAULT_TOLERANCE).unwrap();
            let closed = closed_form_kernel(x, y, alpha, 1.0);
            assert!(rel(k, closed) < 1e-8, "({x}, {y}) alpha {alpha}: {k} vs {closed}");
        }
    }
}

#[test]
fn frozen_reference_values() {
    let s1 = relative_entropy_wedge(&WedgeCauchyData::standard(), DEFAULT_TOLERANCE)
        .unwrap()
        .value;
    assert!(rel(s1, 31.335_067_745_544_357) < 1e-10);
    let pi_only = WedgeCauchyData::new(
        SmoothFunction::zero(),
        SmoothFunction::gauss_bump(1.0, 0.5).unwrap(),
        2.0,
    )
    .unwrap();
    let s1 = relative_entropy_wedge(&pi_only, DEFAULT_TOLERANCE).unwrap().value;
    assert!(rel(s1, 1.544_690_968_763_890_3) < 1e-10);
}

#[test]
fn alpha_limit_is_the_noether_charge() {
    let data = WedgeCauchyData::new(SmoothFunction::bump(1.0, 2.0).unwrap(), SmoothFunction::zero(), 1.0).unwrap();
    let lim = petz_renyi_wedge_alpha_limit(&data, 8..=12, DEFAULT_TOLERANCE).unwrap();
    let s1 = relative_entropy_wedge(&data, DEFAULT_TOLERANCE).unwrap().value;
    assert!(rel(s1, 0.010_774_559_679_640_581) < 1e-10);
    assert!(rel(lim.value, s1) < 1e-3, "{} vs {s1}", lim.value);
}

#[test]
fn quadratic_monotone_and_zero() {
    let data = WedgeCauchyData::new(
        SmoothFunction::bump(1.0, 2.0).unwrap(),
        SmoothFunction::gauss_bump(1.4, 0.3).unwrap().scaled(0.5),
        1.0,
    )
    .unwrap();
    let base = petz_renyi_wedge(&data, 0.5, DEFAULT_TOLERANCE).unwrap().value;
    let tripled = petz_renyi_wedge(&data.scaled(3.0), 0.5, DEFAULT_TOLERANCE)
        .unwrap()
        .value;
    assert!(rel(tripled, 9.0 * base) < 1e-9);
    let s1 = relative_entropy_wedge(&data, DEFAULT_TOLERANCE).unwrap().value;
    let mut prev = 0.0;
    for k in 1..20 {
        let e = petz_renyi_wedge(&data, k as f64 / 20.0, DEFAULT_TOLERANCE).unwrap();
        assert!(e.value >= prev - e.error_estimate && e.value <= s1 + e.error_estimate);
        prev = e.value;
    }
    let zero = WedgeCauchyData::zero(1.0).unwrap();
    assert_eq!(petz_renyi_wedge(&zero, 0.5, DEFAULT_TOLERANCE).unwrap().value, 0.0);
    assert_eq!(relative_entropy_wedge(&zero, DEFAULT_TOLERANCE).unwrap().value, 0.0);
}

#[test]
fn commutator_relations_hold_when_smeared() {
    let g = SmoothFunction::bump(0.5, 1.5).unwrap();
    let h = SmoothFunction::gauss_bump(1.2, 0.6).unwrap();
    for mass in [0.5, 1.0, 3.0] {
        let report = commutator_kernel_checks(mass, &g, &h, DEFAULT_TOLERANCE).unwrap();
        assert!(report.max_residual() <= 1e-8, "mass {mass}: {report:?}");
    }
}
