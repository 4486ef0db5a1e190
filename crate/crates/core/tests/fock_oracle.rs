use nalgebra::DVector;
use num_complex::Complex64;
use renyi_core::corpus::{Corpus, RandomSubspace};
use renyi_core::fock::{braket, FockOracle};
use renyi_core::subspace::{renyi_entropy_of_vector, ComplexHilbertSpaceReal};
use renyi_core::Error;

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn setup(seed: u64, pairs: usize, cutoff: usize) -> (Corpus, RandomSubspace, FockOracle) {
    let mut c = Corpus::new(seed);
    let r = c.factorial_subspace(pairs, 1e2).unwrap();
    let o = FockOracle::new(&r.modular, cutoff).unwrap();
    (c, r, o)
}

fn ambient_vector(c: &mut Corpus, space: &ComplexHilbertSpaceReal, norm_sq: f64) -> DVector<f64> {
    let v = DVector::from_fn(space.real_dim(), |_, _| c.uniform(-1.0, 1.0));
    let s = (norm_sq / space.norm_sq(&v)).sqrt();
    v * s
}

#[test]
fn weyl_relation_fixes_the_phase() {
    for pairs in 1..=2 {
        let (mut c, r, o) = setup(3 + pairs as u64, pairs, 30);
        let space = r.subspace.ambient();
        let f = ambient_vector(&mut c, space, 0.3);
        let g = ambient_vector(&mut c, space, 0.2);
        let omega = o.fock().vacuum();
        let lhs = o.weyl_apply(&f, &o.weyl_apply(&g, &omega));
        let phase = Complex64::new(0.0, -0.5 * space.symplectic(&f, &g)).exp();
        let rhs: Vec<Complex64> = o.weyl_apply(&(&f + &g), &omega).iter().map(|a| a * phase).collect();
        assert!(dist(&lhs, &rhs) < 1e-10, "pairs {pairs}: {}", dist(&lhs, &rhs));
        // sigma(f, g) = 2 Im<f, g>
        assert!((space.symplectic(&f, &g) - 2.0 * space.inner(&f, &g).im).abs() < 1e-14);
    }
}

#[test]
fn coherent_overlap_is_gaussian() {
    let (mut c, r, o) = setup(17, 2, 30);
    let space = r.subspace.ambient();
    for _ in 0..5 {
        let f = ambient_vector(&mut c, space, 0.4);
        let g = ambient_vector(&mut c, space, 0.25);
        let wf = o.coherent_vector(&f).unwrap();
        let wg = o.coherent_vector(&g).unwrap();
        let got = braket(&wf.amplitudes, &wg.amplitudes);
        let expect = Complex64::new(-0.5 * space.norm_sq(&(&f - &g)), space.inner(&f, &g).im).exp();
        assert!((got - expect).norm() < 1e-10, "{got} vs {expect}");
    }
}

#[test]
fn field_normalization_and_norms() {
    let (mut c, r, o) = setup(5, 1, 20);
    let f = c.vector_in(&r.subspace, 0.5);
    let f = &f * (0.25 / r.subspace.ambient().norm_sq(&f)).sqrt();
    let w = o.coherent_vector(&f).unwrap();
    let norm = braket(&w.amplitudes, &w.amplitudes).re.sqrt();
    assert!((norm - 1.0).abs() < 1e-10);
    assert!(w.truncation_error < 1e-10);
    let zero = o.field_operator(&DVector::zeros(4));
    assert!(zero.coefficients().iter().all(|a| a.norm() == 0.0));
    assert_eq!(o.petz_renyi_bruteforce(&DVector::zeros(4), 0.5).unwrap(), 0.0);
}

#[test]
fn oracle_matches_spectral_entropy() {
    let mut c = Corpus::new(99);
    for pairs in 1..=2 {
        for _ in 0..5 {
            let r = c.factorial_subspace(pairs, 1e3).unwrap();
            let f = c.vector_in(&r.subspace, 0.5);
            let o = FockOracle::new(&r.modular, 40).unwrap();
            for alpha in [0.0, 0.25, 0.5, 0.75, 0.9] {
                let exact = renyi_entropy_of_vector(&r.subspace, &f, alpha).unwrap();
                let brute = o.petz_renyi_bruteforce(&f, alpha).unwrap();
                assert!((exact - brute).abs() < 1e-6, "alpha {alpha}: {exact} vs {brute}");
                // closed Gaussian form of the expectation
                let m = &r.modular;
                let closed =
                    (m.space().real_product(&f, &(m.delta_power(1.0 - alpha) * &f)) - m.space().norm_sq(&f)).exp();
                let direct = o
                    .modular_expectation(&o.coherent_vector(&f).unwrap().amplitudes, 1.0 - alpha)
                    .unwrap();
                assert!((closed - direct).abs() < 1e-9 * closed);
            }
            assert!(o.petz_renyi_bruteforce(&f, 0.0).unwrap().abs() < 1e-8);
        }
    }
}

#[test]
fn commutant_excitations_do_not_change_the_state_on_l() {
    let (mut c, r, o) = setup(23, 2, 44);
    let lc = r.subspace.symplectic_complement().unwrap();
    let f = c.vector_in(&r.subspace, 0.2);
    let h = c.vector_in(&lc, 0.2);
    let omega = o.fock().vacuum();
    let psi = o.weyl_apply(&f, &omega);
    // W(h) commutes with W(f), so W(h)* W(f) W(h) Omega = W(f) Omega
    let conj = o.weyl_apply(&(-&h), &o.weyl_apply(&f, &o.weyl_apply(&h, &omega)));
    assert!(dist(&conj, &psi) < 1e-10);
    for alpha in [0.0, 0.5, 0.9] {
        let a = o.petz_renyi_of_vector(&psi, alpha).unwrap();
        let b = o.petz_renyi_of_vector(&conj, alpha).unwrap();
        assert!((a - b).abs() < 1e-8, "alpha {alpha}: {a} vs {b}");
    }
    // W(f) W(h) Omega and W(f) Omega induce the same expectations on W(L)
    let excited = o.weyl_apply(&f, &o.weyl_apply(&h, &omega));
    for _ in 0..4 {
        let g = c.vector_in(&r.subspace, 0.4);
        let e1 = braket(&excited, &o.weyl_apply(&g, &excited));
        let e0 = braket(&psi, &o.weyl_apply(&g, &psi));
        assert!((e1 - e0).norm() < 1e-9, "{e1} vs {e0}");
    }
    // global phases drop out
    let rotated: Vec<Complex64> = psi.iter().map(|a| a * Complex64::from_polar(1.0, 0.7)).collect();
    let s = o.petz_renyi_of_vector(&rotated, 0.5).unwrap();
    assert!((s - o.petz_renyi_of_vector(&psi, 0.5).unwrap()).abs() < 1e-12);
}

#[test]
fn difference_vector_reduction() {
    let (mut c, r, o) = setup(31, 1, 36);
    let f = c.vector_in(&r.subspace, 0.4);
    let g = c.vector_in(&r.subspace, 0.4);
    let omega = o.fock().vacuum();
    let rel = o.weyl_apply(&(-&g), &o.weyl_apply(&f, &omega));
    for alpha in [0.0, 0.3, 0.6, 0.9] {
        let a = o.petz_renyi_of_vector(&rel, alpha).unwrap();
        let b = o.petz_renyi_bruteforce(&(&f - &g), alpha).unwrap();
        assert!((a - b).abs() < 1e-8, "alpha {alpha}: {a} vs {b}");
    }
}

#[test]
fn inadequate_cutoff_is_refused() {
    let (mut c, r, o) = setup(41, 1, 4);
    let f = c.vector_in(&r.subspace, 0.5);
    let f = &f * (3.0 / r.subspace.ambient().norm_sq(&f)).sqrt();
    match o.petz_renyi_bruteforce(&f, 0.5) {
        Err(Error::Truncation { suggested_cutoff, .. }) => assert!(suggested_cutoff > 4),
        other => panic!("expected a truncation error, got {other:?}"),
    }
}
