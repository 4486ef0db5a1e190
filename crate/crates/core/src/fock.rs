//! Truncated bosonic Fock space over a finite-mode one-particle space.
//!
//! This is a deliberately naive oracle: coherent vectors are obtained by
//! exponentiating the field operator on the truncated space, and modular
//! expectations by summing over occupation states. The Fock basis is built
//! on a complex-orthonormal eigenbasis of `delta`, which makes the second
//! quantization `Gamma(delta^r)` diagonal.

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::subspace::{ComplexHilbertSpaceReal, ModularData};

/// Acceptable Poisson tail of the coherent amplitudes beyond the cutoff.
pub const TAIL_TOL: f64 = 1e-8;
/// Acceptable tail of the `Gamma(delta^r)`-reweighted amplitudes.
pub const AMPLIFIED_TAIL_TOL: f64 = 1e-12;
const NONE: u32 = u32::MAX;

/// Occupation-number basis `{n : sum n_i <= N}` of `modes` bosonic modes.
#[derive(Debug, Clone)]
pub struct TruncatedFock {
    modes: usize,
    cutoff: usize,
    occupations: Vec<u16>,
    raise: Vec<u32>,
    lower: Vec<u32>,
}

impl TruncatedFock {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Domain("Fock space needs at least one mode".into()));
        }
        let dim = binomial(cutoff + modes, modes);
        if dim > 50_000_000 {
            return Err(Error::Domain(format!(
                "truncated Fock space of dimension {dim} is too large"
            )));
        }
        let mut occupations = Vec::with_capacity(dim * modes);
        for total in 0..=cutoff {
            let mut current = vec![0u16; modes];
            compositions(total, 0, &mut current, &mut occupations);
        }
        let index: HashMap<&[u16], u32> = occupations
            .chunks(modes)
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let mut raise = vec![NONE; dim * modes];
        let mut lower = vec![NONE; dim * modes];
        let mut probe = vec![0u16; modes];
        for (s, occ) in occupations.chunks(modes).enumerate() {
            let total: usize = occ.iter().map(|&x| x as usize).sum();
            for i in 0..modes {
                probe.copy_from_slice(occ);
                if total < cutoff {
                    probe[i] += 1;
                    raise[s * modes + i] = index[probe.as_slice()];
                    probe[i] -= 1;
                }
                if occ[i] > 0 {
                    probe[i] -= 1;
                    lower[s * modes + i] = index[probe.as_slice()];
                }
            }
        }
        Ok(Self {
            modes,
            cutoff,
            occupations,
            raise,
            lower,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.occupations.len() / self.modes
    }

    pub fn occupation(&self, state: usize) -> &[u16] {
        &self.occupations[state * self.modes..(state + 1) * self.modes]
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `a_i psi`.
    pub fn annihilate(&self, i: usize, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (s, amp) in psi.iter().enumerate() {
            let t = self.lower[s * self.modes + i];
            if t != NONE {
                out[t as usize] += amp * (self.occupation(s)[i] as f64).sqrt();
            }
        }
        out
    }

    /// `a_i^† psi`, dropping the component pushed beyond the cutoff.
    pub fn create(&self, i: usize, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (s, amp) in psi.iter().enumerate() {
            let t = self.raise[s * self.modes + i];
            if t != NONE {
                out[t as usize] += amp * (self.occupation(s)[i] as f64 + 1.0).sqrt();
            }
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Appends all occupation vectors of the given total, lexicographically descending.
fn compositions(remaining: usize, mode: usize, current: &mut [u16], out: &mut Vec<u16>) {
    if mode + 1 == current.len() {
        current[mode] = remaining as u16;
        out.extend_from_slice(current);
        return;
    }
    for k in (0..=remaining).rev() {
        current[mode] = k as u16;
        compositions(remaining - k, mode + 1, current, out);
    }
    current[mode] = 0;
}

/// `P(X > n)` for `X ~ Poisson(mean)`.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    // log of the first discarded term, then ratios mean / k until negligible
    let k0 = n + 1;
    let log_first = -mean + k0 as f64 * mean.ln() - ln_factorial(k0);
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = k0;
    while term > 1e-17 * sum || (k as f64) < mean {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if k > k0 + 100_000 {
            break;
        }
    }
    (log_first.exp() * sum).min(1.0)
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|x| (x as f64).ln()).sum()
}

/// The field operator `phi(f) = a(f) + a^†(f)` with
/// `a^†(f) = sum_i <e_i, f> a_i^†`, as a sparse Hermitian operator.
#[derive(Debug, Clone)]
pub struct FieldOperator<'a> {
    fock: &'a TruncatedFock,
    coefficients: Vec<Complex64>,
}

impl FieldOperator<'_> {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let fock = self.fock;
        let n = fock.modes;
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (s, amp) in psi.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let occ = fock.occupation(s);
            for i in 0..n {
                let c = self.coefficients[i];
                let up = fock.raise[s * n + i];
                if up != NONE {
                    out[up as usize] += c * amp * (occ[i] as f64 + 1.0).sqrt();
                }
                let down = fock.lower[s * n + i];
                if down != NONE {
                    out[down as usize] += c.conj() * amp * (occ[i] as f64).sqrt();
                }
            }
        }
        out
    }

    /// Upper bound on the operator norm on the truncated space.
    pub fn norm_bound(&self) -> f64 {
        let l1: f64 = self.coefficients.iter().map(|c| c.norm()).sum();
        2.0 * l1 * (self.fock.cutoff as f64).sqrt()
    }

    /// `exp(i phi) psi` by a Taylor series run until the terms are below
    /// round-off past the norm bound.
    pub fn exp_i_apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let bound = self.norm_bound();
        let scale = norm(psi);
        let mut sum = psi.to_vec();
        let mut term = psi.to_vec();
        let mut k = 0usize;
        loop {
            k += 1;
            let next = self.apply(&term);
            let factor = Complex64::new(0.0, 1.0 / k as f64);
            term = next.into_iter().map(|x| x * factor).collect();
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            let tn = norm(&term);
            if (k as f64 > bound && tn <= 1e-18 * scale) || tn == 0.0 || k > 10_000 {
                break;
            }
        }
        sum
    }
}

fn norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product `<a, b>`, antilinear in `a`.
pub fn braket(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `W(f) Omega` on the truncated space.
#[derive(Debug, Clone)]
pub struct CoherentVector {
    pub f: DVector<f64>,
    pub amplitudes: Vec<Complex64>,
    /// Poisson mass of the exact coherent vector beyond the cutoff.
    pub truncation_error: f64,
}

/// Truncated Fock space over the `delta` eigenmodes of a standard subspace.
#[derive(Debug, Clone)]
pub struct FockOracle {
    fock: TruncatedFock,
    space: ComplexHilbertSpaceReal,
    modes: Vec<(f64, DVector<f64>)>,
}

impl FockOracle {
    pub fn new(modular: &ModularData, cutoff: usize) -> Result<Self> {
        let modes = modular.complex_eigenbasis();
        let space = modular.space().clone();
        if modes.len() != space.dim_complex() {
            return Err(Error::Domain(format!(
                "eigenbasis has {} modes, expected {}",
                modes.len(),
                space.dim_complex()
            )));
        }
        Ok(Self {
            fock: TruncatedFock::new(modes.len(), cutoff)?,
            space,
            modes,
        })
    }

    pub fn fock(&self) -> &TruncatedFock {
        &self.fock
    }

    /// Eigenvalue of `delta` carried by each mode.
    pub fn mode_eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().map(|(l, _)| *l).collect()
    }

    /// `<e_i, f>` over the eigenmodes.
    pub fn coefficients(&self, f: &DVector<f64>) -> Vec<Complex64> {
        self.modes.iter().map(|(_, e)| self.space.inner(e, f)).collect()
    }

    pub fn field_operator(&self, f: &DVector<f64>) -> FieldOperator<'_> {
        FieldOperator {
            fock: &self.fock,
            coefficients: self.coefficients(f),
        }
    }

    /// `W(f) psi = exp(i phi(f)) psi`.
    pub fn weyl_apply(&self, f: &DVector<f64>, psi: &[Complex64]) -> Vec<Complex64> {
        self.field_operator(f).exp_i_apply(psi)
    }

    /// `W(f) Omega`. Fails when the Poisson tail beyond the cutoff exceeds
    /// [`TAIL_TOL`], suggesting a cutoff that would meet it.
    pub fn coherent_vector(&self, f: &DVector<f64>) -> Result<CoherentVector> {
        let mean = self.space.norm_sq(f);
        let tail = poisson_tail(mean, self.fock.cutoff);
        if tail > TAIL_TOL {
            return Err(Error::Truncation {
                reason: format!(
                    "coherent tail {tail:e} beyond cutoff {} for <f,f> = {mean}",
                    self.fock.cutoff
                ),
                suggested_cutoff: adequate_cutoff(mean, TAIL_TOL * 1e-2),
            });
        }
        Ok(CoherentVector {
            f: f.clone(),
            amplitudes: self.weyl_apply(f, &self.fock.vacuum()),
            truncation_error: tail,
        })
    }

    /// Diagonal of `Gamma(delta^r)`: `prod_i lambda_i^{r n_i}` per occupation state.
    pub fn second_quantized_power(&self, r: f64) -> Vec<f64> {
        let logs: Vec<f64> = self.modes.iter().map(|(l, _)| r * l.ln()).collect();
        (0..self.fock.dim())
            .map(|s| {
                let occ = self.fock.occupation(s);
                occ.iter().zip(&logs).map(|(&n, l)| n as f64 * l).sum::<f64>().exp()
            })
            .collect()
    }

    /// `<psi| Gamma(delta^r) |psi>`, refusing when the reweighted tail of a
    /// coherent-like vector with mode occupations `mu_i` is not negligible.
    pub fn modular_expectation(&self, psi: &[Complex64], r: f64) -> Result<f64> {
        self.check_amplified_tail(psi, r)?;
        let diag = self.second_quantized_power(r);
        Ok(psi.iter().zip(&diag).map(|(a, d)| a.norm_sqr() * d).sum())
    }

    /// Mean occupation of each mode in `psi`.
    fn mode_occupations(&self, psi: &[Complex64]) -> Vec<f64> {
        let mut mu = vec![0.0; self.fock.modes];
        for (s, a) in psi.iter().enumerate() {
            let p = a.norm_sqr();
            for (m, &n) in mu.iter_mut().zip(self.fock.occupation(s)) {
                *m += p * n as f64;
            }
        }
        mu
    }

    fn check_amplified_tail(&self, psi: &[Complex64], r: f64) -> Result<()> {
        // Gamma(delta^r) turns Poisson(mu_i) occupations into Poisson(mu_i lambda_i^r)
        let mean: f64 = self
            .mode_occupations(psi)
            .iter()
            .zip(&self.modes)
            .map(|(mu, (l, _))| mu * l.powf(r))
            .sum();
        // the last few shells are distorted by the truncation itself
        let trusted = self.fock.cutoff.saturating_sub(self.fock.cutoff / 4 + 2);
        let tail = poisson_tail(mean, trusted);
        if tail > AMPLIFIED_TAIL_TOL {
            let lmax = self.modes.iter().map(|(l, _)| *l).fold(0.0, f64::max);
            return Err(Error::Truncation {
                reason: format!(
                    "Gamma(delta^{r}) amplifies the tail beyond occupation {trusted} to {tail:e} (largest eigenvalue {lmax})"
                ),
                suggested_cutoff: adequate_cutoff(mean, AMPLIFIED_TAIL_TOL * 1e-2) * 4 / 3 + 3,
            });
        }
        Ok(())
    }

    /// `S_alpha = ln <W(f)Omega| Gamma(delta^{1-alpha}) |W(f)Omega> / (alpha - 1)`.
    pub fn petz_renyi_bruteforce(&self, f: &DVector<f64>, alpha: f64) -> Result<f64> {
        let v = self.coherent_vector(f)?;
        self.petz_renyi_of_vector(&v.amplitudes, alpha)
    }

    /// `S_alpha` of an arbitrary unit vector of the truncated space
    /// against the vacuum modular operator.
    pub fn petz_renyi_of_vector(&self, psi: &[Complex64], alpha: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
        }
        let e = self.modular_expectation(psi, 1.0 - alpha)?;
        Ok(e.ln() / (alpha - 1.0))
    }
}

/// Smallest cutoff whose Poisson tail for `mean` is below `tol`.
pub fn adequate_cutoff(mean: f64, tol: f64) -> usize {
    let mut n = mean.ceil() as usize;
    while poisson_tail(mean, n) > tol {
        n += 1;
    }
    n
}

/// `second_quantized_power` of [`FockOracle`] as a free function.
pub fn second_quantized_power(oracle: &FockOracle, r: f64) -> Vec<f64> {
    oracle.second_quantized_power(r)
}

/// [`FockOracle::petz_renyi_bruteforce`] as a free function.
pub fn petz_renyi_bruteforce(oracle: &FockOracle, f: &DVector<f64>, alpha: f64) -> Result<f64> {
    oracle.petz_renyi_bruteforce(f, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{modular_operator, StandardSubspace};
    use nalgebra::DMatrix;

    fn pair_subspace() -> StandardSubspace {
        let b = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.8, 1.0, 0.0]);
        StandardSubspace::new(ComplexHilbertSpaceReal::canonical(2), b).unwrap()
    }

    #[test]
    fn dimension_and_ccr() {
        let f = TruncatedFock::new(3, 5).unwrap();
        assert_eq!(f.dim(), binomial(8, 3));
        let mut psi = vec![Complex64::new(0.0, 0.0); f.dim()];
        for (s, p) in psi.iter_mut().enumerate() {
            let occ: usize = f.occupation(s).iter().map(|&x| x as usize).sum();
            if occ < 5 {
                *p = Complex64::new(1.0 + s as f64, 0.5 * s as f64);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let ab = f.annihilate(i, &f.create(j, &psi));
                let ba = f.create(j, &f.annihilate(i, &psi));
                for s in 0..f.dim() {
                    let expect = if i == j { psi[s] } else { Complex64::new(0.0, 0.0) };
                    assert!((ab[s] - ba[s] - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn poisson_tail_values() {
        // P(X > 0) = 1 - e^{-m}
        assert!((poisson_tail(0.3, 0) - (1.0 - (-0.3f64).exp())).abs() < 1e-15);
        assert!((poisson_tail(2.0, 1) - (1.0 - 3.0 * (-2.0f64).exp())).abs() < 1e-15);
        assert_eq!(poisson_tail(0.0, 3), 0.0);
    }

    #[test]
    fn vacuum_expectations() {
        let m = modular_operator(&pair_subspace()).unwrap();
        let o = FockOracle::new(&m, 20).unwrap();
        let f = DVector::from_column_slice(&[0.3, -0.1, 0.2, 0.25]);
        let mean = o.space.norm_sq(&f);
        let phi = o.field_operator(&f);
        let om = o.fock.vacuum();
        let p2 = braket(&om, &phi.apply(&phi.apply(&om)));
        assert!((p2.re - mean).abs() < 1e-14 && p2.im.abs() < 1e-14);
        let w = o.coherent_vector(&f).unwrap();
        assert!((norm(&w.amplitudes) - 1.0).abs() < 1e-12);
        let vev = braket(&om, &w.amplitudes);
        assert!((vev - Complex64::new((-mean / 2.0).exp(), 0.0)).norm() < 1e-12);
        let zero = o.coherent_vector(&DVector::zeros(4)).unwrap();
        assert_eq!(zero.amplitudes, om);
    }

    #[test]
    fn single_mode_power() {
        let m = modular_operator(&pair_subspace()).unwrap();
        let o = FockOracle::new(&m, 4).unwrap();
        let d = o.second_quantized_power(0.5);
        let lam = o.mode_eigenvalues();
        for s in 0..o.fock.dim() {
            let occ = o.fock.occupation(s);
            let expect = lam[0].powf(0.5 * occ[0] as f64) * lam[1].powf(0.5 * occ[1] as f64);
            assert!((d[s] - expect).abs() < 1e-12 * expect);
        }
        assert!(o.second_quantized_power(0.0).iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn large_vectors_are_refused() {
        let m = modular_operator(&pair_subspace()).unwrap();
        let o = FockOracle::new(&m, 5).unwrap();
        let f = DVector::from_column_slice(&[2.0, 0.0, 1.0, 0.0]);
        let e = o.coherent_vector(&f).unwrap_err();
        assert!(matches!(e, Error::Truncation { suggested_cutoff, .. } if suggested_cutoff > 5));
    }
}
