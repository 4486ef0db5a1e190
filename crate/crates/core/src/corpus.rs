//! Seeded random inputs for property checks and self-tests.
//!
//! Every generator draws from a [`ChaCha8Rng`], so a seed fixes the whole
//! corpus on every platform.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::subspace::{modular_operator, ComplexHilbertSpaceReal, ModularData, StandardSubspace};

/// Largest accepted condition number of a random basis.
pub const MAX_BASIS_CONDITION: f64 = 1e3;

const MAX_ATTEMPTS: usize = 10_000;

pub struct Corpus {
    rng: ChaCha8Rng,
}

/// A factorial standard subspace with its modular data.
pub struct RandomSubspace {
    pub subspace: StandardSubspace,
    pub modular: ModularData,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// State measure with `2..=max_atoms` atoms, `ln(lambda)` in `[-6, 6]`
    /// before rescaling, total weight 1 and `sum w lambda = 1`.
    ///
    /// The last condition holds for every measure arising from a vector
    /// `Psi` and a cyclic-separating `Phi` with `||Delta^{1/2} Psi|| = 1`,
    /// and it is what makes `S_0 = 0`.
    pub fn state_measure(&mut self, max_atoms: usize) -> SpectralMeasure {
        let n = self.rng.random_range(2..=max_atoms.max(2));
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    self.rng.random_range(-6.0..6.0f64).exp(),
                    self.rng.random_range(0.01..1.0),
                )
            })
            .collect();
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        let moment: f64 = raw.iter().map(|(l, w)| l * w / total).sum();
        SpectralMeasure::new(raw.iter().map(|(l, w)| (l / moment, w / total))).expect("positive atoms by construction")
    }

    /// Factorial standard subspace of `C^{2 pairs}` with a uniformly random
    /// real basis of condition number at most [`MAX_BASIS_CONDITION`] and
    /// modular spectrum inside `[1/max_delta, max_delta]`.
    pub fn factorial_subspace(&mut self, pairs: usize, max_delta: f64) -> Result<RandomSubspace> {
        if pairs == 0 {
            return Err(Error::Domain("need at least one mode pair".into()));
        }
        let n = 2 * pairs;
        for _ in 0..MAX_ATTEMPTS {
            let basis = DMatrix::from_fn(2 * n, n, |_, _| self.rng.random_range(-1.0..1.0));
            let sv = basis.singular_values();
            if sv.max() > MAX_BASIS_CONDITION * sv.min() {
                continue;
            }
            let Ok(subspace) = StandardSubspace::new(ComplexHilbertSpaceReal::canonical(n), basis) else {
                continue;
            };
            let Ok(modular) = modular_operator(&subspace) else {
                continue;
            };
            let ev = modular.delta_eigenvalues();
            if ev[0] * max_delta < 1.0 || *ev.last().unwrap() > max_delta {
                continue;
            }
            return Ok(RandomSubspace { subspace, modular });
        }
        Err(Error::Domain(format!(
            "no factorial subspace with spectrum inside [1/{max_delta}, {max_delta}] after {MAX_ATTEMPTS} draws"
        )))
    }

    /// Random element of `l` with `(f, f)` uniform in `(0, max_norm_sq]`.
    pub fn vector_in(&mut self, l: &StandardSubspace, max_norm_sq: f64) -> DVector<f64> {
        let k = l.basis().ncols();
        loop {
            let c = DVector::from_fn(k, |_, _| self.rng.random_range(-1.0..1.0));
            let f = l.element(&c);
            let nsq = l.ambient().norm_sq(&f);
            if nsq > 1e-6 {
                let target = max_norm_sq * self.rng.random_range(f64::EPSILON..=1.0);
                return f * (target / nsq).sqrt();
            }
        }
    }
}
