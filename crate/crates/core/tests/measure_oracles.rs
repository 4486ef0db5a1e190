use num_complex::Complex64;
use proptest::prelude::*;
use renyi_core::corpus::Corpus;
use renyi_core::measure::*;

/// `ln(8/9)` to 50 digits; the two-atom measure below has `S_{1/2} = -2 ln(3 / (2 sqrt 2))`.
const LN_EIGHT_NINTHS: &str = "-0.11778303565638345453879410947052170506848071256473";

#[test]
fn two_atom_half_alpha_matches_high_precision_value() {
    let m = SpectralMeasure::new([(0.5, 0.5), (2.0, 0.5)]).unwrap();
    let exact: f64 = LN_EIGHT_NINTHS.parse().unwrap();
    let s = petz_renyi_from_measure(&m, 0.5).unwrap();
    assert!((s - exact).abs() <= 2.0 * f64::EPSILON * exact.abs(), "{s} vs {exact}");
    // -(1/2) ln(1/2) - (1/2) ln 2 vanishes
    assert!(relative_entropy_from_measure(&m).unwrap().abs() < 1e-16);
}

#[test]
fn csv_round_trip_is_exact() {
    let mut c = Corpus::new(1);
    for _ in 0..20 {
        let m = c.state_measure(40);
        let back = SpectralMeasure::from_csv(&m.to_csv()).unwrap();
        assert_eq!(m.atoms(), back.atoms());
    }
    assert!(malformed_input_is_rejected());
}

fn malformed_input_is_rejected() -> bool {
    SpectralMeasure::from_csv("x,y\n1,1\n").is_err()
        && SpectralMeasure::from_csv("lambda,weight\n1,2,3\n").is_err()
        && SpectralMeasure::from_csv("lambda,weight\n-1,1\n").is_err()
        && SpectralMeasure::from_csv("lambda,weight\n").unwrap().is_empty()
}

#[test]
fn alpha_derivative_at_one_is_half_the_log_variance() {
    // d/d alpha S_alpha at 1 equals Var(ln lambda) / 2 for a state measure
    let mut c = Corpus::new(2);
    for _ in 0..10 {
        let m = c.state_measure(12);
        let mean: f64 = m.atoms().iter().map(|a| a.weight * a.lambda.ln()).sum();
        let var: f64 = m
            .atoms()
            .iter()
            .map(|a| a.weight * (a.lambda.ln() - mean).powi(2))
            .sum();
        let h = 1e-4;
        let slope =
            (petz_renyi_from_measure(&m, 1.0 - h).unwrap() - petz_renyi_from_measure(&m, 1.0 - 2.0 * h).unwrap()) / h;
        assert!(
            (slope - 0.5 * var).abs() < 2e-3 * var.max(1.0),
            "{slope} vs {}",
            0.5 * var
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn endpoint_monotone_bounded(seed in any::<u64>()) {
        let m = Corpus::new(seed).state_measure(50);
        prop_assert!(petz_renyi_from_measure(&m, 0.0).unwrap().abs() < 1e-12);
        let rel = relative_entropy_from_measure(&m).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for a in AlphaGrid::uniform(20).unwrap().values() {
            let s = petz_renyi_from_measure(&m, *a).unwrap();
            prop_assert!(s >= prev - 1e-10);
            prop_assert!(s <= rel + 1e-10);
            prev = s;
        }
    }

    #[test]
    fn strip_bound_and_concavity(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let m = c.state_measure(30);
        for _ in 0..50 {
            let z = Complex64::new(c.uniform(-20.0, 20.0), c.uniform(-1.0, 0.0));
            prop_assert!(modular_flow_on_strip(&m, z).unwrap().norm() <= 2.0);
        }
        let h = 1e-3;
        for k in 1..1000 {
            let r = k as f64 * h;
            if r + h > 1.0 { break; }
            let second = log_moment_f(&m, r + h).unwrap() - 2.0 * log_moment_f(&m, r).unwrap() + log_moment_f(&m, r - h).unwrap();
            prop_assert!(second <= 1e-9);
        }
    }

    #[test]
    fn csv_round_trip(seed in any::<u64>()) {
        let m = Corpus::new(seed).state_measure(20);
        let back = SpectralMeasure::from_csv(&m.to_csv()).unwrap();
        prop_assert_eq!(back.atoms(), m.atoms());
    }
}
