//! Modular theory of standard subspaces of a finite-dimensional complex
//! Hilbert space, in its real representation.
//!
//! A complex space of dimension `n` is `R^{2n}` with a positive-definite
//! metric `g` and a complex structure `J` (`J^2 = -1`, `J^T g J = g`). The
//! scalar product is `<x, y> = g(x, y) + i g(Jx, y)`, antilinear in `x`,
//! and the symplectic form is `sigma(x, y) = 2 g(Jx, y) = 2 Im <x, y>`.
//! All adjoints below are taken with respect to `g`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{renyi_vector_entropy_from_measure, vector_entropy_from_measure, SpectralMeasure};

/// Tolerance on the defining identities of `g` and `J`.
const STRUCTURE_TOL: f64 = 1e-10;
/// Relative singular-value threshold of the rank tests.
pub const RANK_TOL: f64 = 1e-10;
/// `|lambda - 1|` below this rejects a modular operator as non-factorial.
pub const FACTORIALITY_TOL: f64 = 1e-8;
/// Relative gap below which eigenvalues are merged into one atom.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Relative distance from `L` tolerated for vectors declared to lie in `L`.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexHilbertSpaceReal {
    metric: DMatrix<f64>,
    complex_structure: DMatrix<f64>,
    /// Lower Cholesky factor `C` of the metric, `g = C C^T`.
    chol: DMatrix<f64>,
}

impl ComplexHilbertSpaceReal {
    pub fn new(metric: DMatrix<f64>, complex_structure: DMatrix<f64>) -> Result<Self> {
        let d = metric.nrows();
        if d == 0 || !d.is_multiple_of(2) || !metric.is_square() || complex_structure.shape() != (d, d) {
            return Err(Error::Domain(format!(
                "metric and complex structure must be square of equal even size, got {:?} and {:?}",
                metric.shape(),
                complex_structure.shape()
            )));
        }
        let scale = metric.amax().max(1.0);
        if (&metric - metric.transpose()).amax() > STRUCTURE_TOL * scale {
            return Err(Error::Domain("metric is not symmetric".into()));
        }
        let chol = metric
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Domain("metric is not positive definite".into()))?
            .l();
        let j = &complex_structure;
        if (j * j + DMatrix::identity(d, d)).amax() > STRUCTURE_TOL * j.amax().powi(2).max(1.0) {
            return Err(Error::Domain("complex structure does not square to -1".into()));
        }
        if (j.transpose() * &metric * j - &metric).amax() > STRUCTURE_TOL * scale * j.amax().powi(2).max(1.0) {
            return Err(Error::Domain(
                "complex structure is not orthogonal for the metric".into(),
            ));
        }
        Ok(Self {
            metric,
            complex_structure,
            chol,
        })
    }

    /// `g = 1`, `J (a, b) = (-b, a)` on each consecutive coordinate pair.
    pub fn canonical(dim_complex: usize) -> Self {
        let d = 2 * dim_complex;
        let mut j = DMatrix::zeros(d, d);
        for k in 0..dim_complex {
            j[(2 * k + 1, 2 * k)] = 1.0;
            j[(2 * k, 2 * k + 1)] = -1.0;
        }
        Self {
            metric: DMatrix::identity(d, d),
            complex_structure: j,
            chol: DMatrix::identity(d, d),
        }
    }

    pub fn dim_complex(&self) -> usize {
        self.metric.nrows() / 2
    }

    pub fn real_dim(&self) -> usize {
        self.metric.nrows()
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.complex_structure
    }

    pub fn real_product(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.metric * y))
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Complex64 {
        let gy = &self.metric * y;
        Complex64::new(x.dot(&gy), (&self.complex_structure * x).dot(&gy))
    }

    pub fn symplectic(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        2.0 * (&self.complex_structure * x).dot(&(&self.metric * y))
    }

    pub fn norm_sq(&self, x: &DVector<f64>) -> f64 {
        self.real_product(x, x)
    }

    /// Adjoint of a real-linear map with respect to `g`: `g^{-1} A^T g`.
    pub fn adjoint(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let rhs = a.transpose() * &self.metric;
        self.solve_metric(&rhs)
    }

    fn solve_metric(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        let c = &self.chol;
        let y = c.solve_lower_triangular(rhs).expect("Cholesky factor is nonsingular");
        c.transpose()
            .solve_upper_triangular(&y)
            .expect("Cholesky factor is nonsingular")
    }
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = singular_values(m);
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > RANK_TOL * top).count()
}

/// A real-linear subspace `L` with `L ∩ JL = {0}` and `L + JL` the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardSubspace {
    ambient: ComplexHilbertSpaceReal,
    basis: DMatrix<f64>,
}

impl StandardSubspace {
    /// Checks standardness by rank: the columns of `basis` must be
    /// independent and, together with their images under `J`, span `R^{2n}`.
    pub fn new(ambient: ComplexHilbertSpaceReal, basis: DMatrix<f64>) -> Result<Self> {
        let d = ambient.real_dim();
        let n = ambient.dim_complex();
        let k = basis.ncols();
        if basis.nrows() != d {
            return Err(Error::Domain(format!(
                "basis vectors have {} entries, expected {d}",
                basis.nrows()
            )));
        }
        if k == 0 {
            return Err(Error::NotStandard("L + JL is not dense: the basis is empty".into()));
        }
        let rank_l = numerical_rank(&basis);
        if rank_l < k {
            return Err(Error::NotStandard(format!(
                "basis columns are linearly dependent (rank {rank_l} < {k})"
            )));
        }
        let jb = ambient.complex_structure() * &basis;
        let mut joint = DMatrix::zeros(d, 2 * k);
        joint.columns_mut(0, k).copy_from(&basis);
        joint.columns_mut(k, k).copy_from(&jb);
        let rank_joint = numerical_rank(&joint);
        if rank_joint < 2 * k {
            return Err(Error::NotStandard(format!(
                "L ∩ JL ≠ {{0}}: rank[B | JB] = {rank_joint} < 2·{k}"
            )));
        }
        if k < n {
            return Err(Error::NotStandard(format!(
                "L + JL is not dense: real dimension {} < {d}",
                2 * k
            )));
        }
        Ok(Self { ambient, basis })
    }

    pub fn ambient(&self) -> &ComplexHilbertSpaceReal {
        &self.ambient
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// The vector `B c` of `L` with coefficients `c`.
    pub fn element(&self, coefficients: &DVector<f64>) -> DVector<f64> {
        &self.basis * coefficients
    }

    /// `||f - P_L f||_g / ||f||_g` with `P_L` the `g`-orthogonal projection
    /// onto `L` (0 for `f = 0`).
    pub fn relative_distance(&self, f: &DVector<f64>) -> f64 {
        let norm = self.ambient.norm_sq(f).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let ct = self.ambient.chol.transpose();
        let a = &ct * &self.basis;
        let b = &ct * f;
        let svd = a.svd(true, true);
        let c = svd.solve(&b, 1e-14).expect("SVD with both factors");
        let r = &self.basis * c - f;
        self.ambient.norm_sq(&r).sqrt() / norm
    }

    /// The symplectic complement `L' = {h : sigma(h, f) = 0 for all f in L}`,
    /// which equals `(JL)^{⊥g}` and is again standard.
    pub fn symplectic_complement(&self) -> Result<StandardSubspace> {
        let jb = self.ambient.complex_structure() * &self.basis;
        let d = self.ambient.real_dim();
        let k = self.basis.ncols();
        // zero-padded to square so that the SVD returns a full right factor
        let mut constraints = DMatrix::zeros(d, d);
        constraints
            .rows_mut(0, k)
            .copy_from(&(self.ambient.metric() * jb).transpose());
        let svd = constraints.svd(false, true);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let vt = svd.v_t.expect("requested");
        // rows of V^T beyond the rank span the kernel
        let mut kernel = DMatrix::zeros(d, d - k);
        for (col, &row) in order[k..].iter().enumerate() {
            kernel.set_column(col, &vt.row(row).transpose());
        }
        StandardSubspace::new(self.ambient.clone(), kernel)
    }
}

/// The Tomita operator `S (h + Jk) = h - Jk` as a real `2n x 2n` matrix.
pub fn build_tomita(l: &StandardSubspace) -> Result<DMatrix<f64>> {
    let d = l.ambient.real_dim();
    let k = l.basis.ncols();
    let jb = l.ambient.complex_structure() * &l.basis;
    let mut m = DMatrix::zeros(d, 2 * k);
    m.columns_mut(0, k).copy_from(&l.basis);
    m.columns_mut(k, k).copy_from(&jb);
    let mut target = m.clone();
    target.columns_mut(k, k).neg_mut();
    let m_inv = m
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::NotStandard("[B | JB] is singular".into()))?;
    Ok(target * m_inv)
}

/// Polar decomposition `s = j delta^{1/2}` of the Tomita operator, with the
/// spectral resolution of `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    subspace: StandardSubspace,
    s: DMatrix<f64>,
    j: DMatrix<f64>,
    delta: DMatrix<f64>,
    /// Ascending; each value repeats with even multiplicity since `delta` is complex-linear.
    eigenvalues: Vec<f64>,
    /// Columns form a `g`-orthonormal real eigenframe matching `eigenvalues`.
    eigenvectors: DMatrix<f64>,
}

/// Residuals of the modular identities; all should be at round-off level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularResiduals {
    /// `max |j delta j - delta^{-1}|`.
    pub j_delta_j: f64,
    /// `max |delta J - J delta|`.
    pub delta_commutes_with_j: f64,
    /// `max |j J + J j|`.
    pub j_antilinear: f64,
    /// `max |j^2 - 1|`.
    pub j_involutive: f64,
    /// Largest relative distance of `delta^{it} b` from `L` over basis vectors `b` and sampled `t`.
    pub flow_invariance: f64,
    /// `max |lambda_k lambda_{2n-1-k} - 1|` over the sorted spectrum.
    pub spectral_pairing: f64,
    /// `max |S(h + Jk) - (h - Jk)|` over basis pairs.
    pub tomita_action: f64,
}

/// Modular operator and conjugation of `l`. Fails with
/// [`Error::Factoriality`] when `delta` has an eigenvalue at 1.
pub fn modular_operator(l: &StandardSubspace) -> Result<ModularData> {
    let space = &l.ambient;
    let s = build_tomita(l)?;
    let delta = space.adjoint(&s) * &s;
    // delta is g-self-adjoint; C^T delta C^{-T} is symmetric
    let c = &space.chol;
    let ct = c.transpose();
    let ct_inv = ct
        .clone()
        .solve_upper_triangular(&DMatrix::identity(space.real_dim(), space.real_dim()))
        .expect("Cholesky factor is nonsingular");
    let sym = &ct * &delta * &ct_inv;
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(space.real_dim(), space.real_dim());
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &(&ct_inv * eig.eigenvectors.column(i)));
    }
    if let Some(&bad) = eigenvalues.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::NotStandard(format!(
            "modular operator has non-positive eigenvalue {bad}"
        )));
    }
    if let Some(&one) = eigenvalues.iter().find(|&&x| (x - 1.0).abs() < FACTORIALITY_TOL) {
        return Err(Error::Factoriality {
            eigenvalue: one,
            tolerance: FACTORIALITY_TOL,
        });
    }
    let mut data = ModularData {
        subspace: l.clone(),
        j: DMatrix::zeros(0, 0),
        s,
        delta,
        eigenvalues,
        eigenvectors,
    };
    data.j = &data.s * data.delta_power(-0.5);
    Ok(data)
}

impl ModularData {
    pub fn subspace(&self) -> &StandardSubspace {
        &self.subspace
    }

    pub fn space(&self) -> &ComplexHilbertSpaceReal {
        &self.subspace.ambient
    }

    pub fn s_matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn j_matrix(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn delta(&self) -> &DMatrix<f64> {
        &self.delta
    }

    pub fn delta_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn delta_eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `sum_k phi(lambda_k) e_k e_k^T g` plus `sum_k psi(lambda_k) J e_k e_k^T g`.
    fn spectral_sum(&self, phi: impl Fn(f64) -> f64, psi: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let d = self.space().real_dim();
        let mut re = DMatrix::zeros(d, d);
        let mut im = DMatrix::zeros(d, d);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let e = self.eigenvectors.column(k);
            let proj = e * e.transpose();
            re += &proj * phi(lambda);
            im += &proj * psi(lambda);
        }
        let j = self.space().complex_structure();
        (re + j * im) * self.space().metric()
    }

    /// `delta^r` for real `r`.
    pub fn delta_power(&self, r: f64) -> DMatrix<f64> {
        self.spectral_sum(|l| l.powf(r), |_| 0.0)
    }

    /// The modular flow `delta^{it}`, a `g`-orthogonal complex-linear map.
    pub fn delta_it(&self, t: f64) -> DMatrix<f64> {
        self.spectral_sum(|l| (t * l.ln()).cos(), |l| (t * l.ln()).sin())
    }

    /// Eigenvalue clusters `(lambda, first, last)` over the sorted spectrum.
    fn clusters(&self) -> Vec<(f64, usize, usize)> {
        let mut out: Vec<(f64, usize, usize)> = Vec::new();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some((rep, _, last)) if (lambda - *rep).abs() <= DEGENERACY_TOL * lambda.max(*rep) => *last = k,
                _ => out.push((lambda, k, k)),
            }
        }
        for c in &mut out {
            let (sum, count) = (c.1..=c.2).fold((0.0, 0.0), |(s, n), k| (s + self.eigenvalues[k], n + 1.0));
            c.0 = sum / count;
        }
        out
    }

    /// A complex-orthonormal eigenbasis `(lambda_i, e_i)` of `delta`, `i = 0..n`,
    /// built by complex Gram-Schmidt within each eigenspace.
    pub fn complex_eigenbasis(&self) -> Vec<(f64, DVector<f64>)> {
        let space = self.space();
        let j = space.complex_structure();
        let mut basis = Vec::with_capacity(space.dim_complex());
        for (lambda, first, last) in self.clusters() {
            let mut chosen: Vec<DVector<f64>> = Vec::new();
            for k in first..=last {
                let mut v: DVector<f64> = self.eigenvectors.column(k).into_owned();
                for e in &chosen {
                    // subtract the component along the complex line of e, i.e. along e and Je
                    let je = j * e;
                    v -= e * space.real_product(e, &v) + &je * space.real_product(&je, &v);
                }
                let norm = space.norm_sq(&v).sqrt();
                if norm > 1e-6 {
                    chosen.push(v / norm);
                }
            }
            basis.extend(chosen.into_iter().map(|e| (lambda, e)));
        }
        basis
    }

    /// The spectral measure `d(f, e_lambda f)` of a vector `f` in `L`.
    pub fn vector_spectral_measure(&self, f: &DVector<f64>) -> Result<SpectralMeasure> {
        vector_spectral_measure(self, f)
    }

    pub fn residuals(&self) -> ModularResiduals {
        let space = self.space();
        let d = space.real_dim();
        let id = DMatrix::<f64>::identity(d, d);
        let jm = space.complex_structure();
        let inv = self.delta_power(-1.0);
        let j_delta_j = (&self.j * &self.delta * &self.j - inv).amax();
        let delta_commutes_with_j = (&self.delta * jm - jm * &self.delta).amax();
        let j_antilinear = (&self.j * jm + jm * &self.j).amax();
        let j_involutive = (&self.j * &self.j - &id).amax();
        let mut flow_invariance: f64 = 0.0;
        for t in [0.3, 1.7, -2.2] {
            let u = self.delta_it(t);
            for b in self.subspace.basis.column_iter() {
                let moved = &u * b;
                flow_invariance = flow_invariance.max(self.subspace.relative_distance(&moved));
            }
        }
        let n = self.eigenvalues.len();
        let spectral_pairing = (0..n)
            .map(|k| (self.eigenvalues[k] * self.eigenvalues[n - 1 - k] - 1.0).abs())
            .fold(0.0, f64::max);
        let mut tomita_action: f64 = 0.0;
        for h in self.subspace.basis.column_iter() {
            for k in self.subspace.basis.column_iter() {
                let jk = jm * k;
                let lhs = &self.s * (h + &jk);
                tomita_action = tomita_action.max((lhs - (h - &jk)).amax());
            }
        }
        ModularResiduals {
            j_delta_j,
            delta_commutes_with_j,
            j_antilinear,
            j_involutive,
            flow_invariance,
            spectral_pairing,
            tomita_action,
        }
    }
}

/// The spectral measure `d(f, e_lambda f)`: one atom per distinct
/// eigenvalue, weighted by `g(f, P_lambda f)`. Total mass `<f, f>`.
pub fn vector_spectral_measure(m: &ModularData, f: &DVector<f64>) -> Result<SpectralMeasure> {
    let space = m.space();
    if f.len() != space.real_dim() {
        return Err(Error::Domain(format!(
            "vector has {} entries, expected {}",
            f.len(),
            space.real_dim()
        )));
    }
    let dist = m.subspace.relative_distance(f);
    if dist > MEMBERSHIP_TOL {
        return Err(Error::Domain(format!(
            "vector is not in L (relative distance {dist:e})"
        )));
    }
    let gf = space.metric() * f;
    let coeff: Vec<f64> = m.eigenvectors.column_iter().map(|e| e.dot(&gf)).collect();
    let atoms = m
        .clusters()
        .into_iter()
        .map(|(lambda, first, last)| (lambda, (first..=last).map(|k| coeff[k] * coeff[k]).sum::<f64>()))
        .filter(|&(_, w)| w > 0.0)
        .collect::<Vec<_>>();
    Ok(SpectralMeasure::new(atoms)?.with_label("vector measure of a standard subspace"))
}

/// Renyi entropy `S_alpha(f)` of a vector `f` in `L`, `alpha` in `[0, 1)`.
pub fn renyi_entropy_of_vector(l: &StandardSubspace, f: &DVector<f64>, alpha: f64) -> Result<f64> {
    let m = modular_operator(l)?;
    renyi_vector_entropy_from_measure(&vector_spectral_measure(&m, f)?, alpha)
}

/// Entropy `S(f) = -(f, ln(delta) f)` of a vector `f` in `L`.
pub fn entropy_of_vector(l: &StandardSubspace, f: &DVector<f64>) -> Result<f64> {
    let m = modular_operator(l)?;
    Ok(vector_entropy_from_measure(&vector_spectral_measure(&m, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Shrunk inputs may be degenerate; those are skipped.
    fn try_subspace(pairs: usize, entries: &[f64]) -> Option<StandardSubspace> {
        let n = 2 * pairs;
        let basis = DMatrix::from_iterator(2 * n, n, entries.iter().copied());
        let cond = {
            let sv = singular_values(&basis);
            sv.iter().copied().fold(0.0, f64::max) / sv.iter().copied().fold(f64::INFINITY, f64::min)
        };
        if cond > 1e3 {
            return None;
        }
        StandardSubspace::new(ComplexHilbertSpaceReal::canonical(n), basis).ok()
    }

    #[test]
    fn tomita_of_real_axis() {
        let l = StandardSubspace::new(
            ComplexHilbertSpaceReal::canonical(1),
            DMatrix::from_column_slice(2, 1, &[1.0, 0.0]),
        )
        .unwrap();
        let s = build_tomita(&l).unwrap();
        assert!((s - DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).amax() < 1e-15);
        assert!(matches!(modular_operator(&l), Err(Error::Factoriality { .. })));
    }

    #[test]
    fn tomita_of_rotated_line() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let space = ComplexHilbertSpaceReal::canonical(1);
        let h = DVector::from_column_slice(&[c, s]);
        let l = StandardSubspace::new(space.clone(), DMatrix::from_column_slice(2, 1, &[c, s])).unwrap();
        let t = build_tomita(&l).unwrap();
        let jh = space.complex_structure() * &h;
        assert!((&t * &h - &h).amax() < 1e-14);
        assert!((&t * &jh + &jh).amax() < 1e-14);
        let j = space.complex_structure();
        assert!((&t * j + j * &t).amax() < 1e-14);
    }

    #[test]
    fn non_standard_inputs_are_named() {
        let space = ComplexHilbertSpaceReal::canonical(2);
        // L = span{e, Je} meets JL
        let b = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let e = StandardSubspace::new(space.clone(), b).unwrap_err();
        assert!(matches!(e, Error::NotStandard(ref m) if m.contains("L ∩ JL")));
        let b = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
        let e = StandardSubspace::new(space.clone(), b).unwrap_err();
        assert!(matches!(e, Error::NotStandard(ref m) if m.contains("dense")));
        let b = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        assert!(StandardSubspace::new(space, b).is_err());
    }

    #[test]
    fn structure_validation() {
        let g = DMatrix::identity(2, 2);
        assert!(ComplexHilbertSpaceReal::new(g.clone(), DMatrix::identity(2, 2)).is_err());
        let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(ComplexHilbertSpaceReal::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]), j.clone()).is_err());
        let space = ComplexHilbertSpaceReal::new(g, j).unwrap();
        let x = DVector::from_column_slice(&[1.0, 0.0]);
        let y = DVector::from_column_slice(&[0.0, 1.0]);
        // <x, i x> = i
        assert!((space.inner(&x, &y) - Complex64::i()).norm() < 1e-15);
        assert_eq!(space.symplectic(&x, &y), 2.0);
    }

    #[test]
    fn single_pair_closed_form() {
        // L spanned by e1 and e2 + t i e1 in C^2
        let tt = 0.8;
        let b = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, tt, 1.0, 0.0]);
        let l = StandardSubspace::new(ComplexHilbertSpaceReal::canonical(2), b).unwrap();
        let m = modular_operator(&l).unwrap();
        let ev = m.delta_eigenvalues();
        assert_eq!(ev.len(), 4);
        assert!((ev[0] - ev[1]).abs() < 1e-12 && (ev[2] - ev[3]).abs() < 1e-12);
        assert!((ev[0] * ev[3] - 1.0).abs() < 1e-12);
        let r = m.residuals();
        assert!(r.j_delta_j < 1e-10 && r.tomita_action < 1e-10 && r.flow_invariance < 1e-8);
    }

    fn entries(pairs: usize) -> impl Strategy<Value = Vec<f64>> {
        let n = 2 * pairs;
        prop::collection::vec(-1.0f64..1.0, 2 * n * n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn modular_identities(pairs in 1usize..=2, seed in entries(2)) {
            let n = 2 * pairs;
            let l = try_subspace(pairs, &seed[..2 * n * n]);
            prop_assume!(l.is_some());
            let l = l.unwrap();
            let m = match modular_operator(&l) {
                Ok(m) => m,
                Err(Error::Factoriality { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let r = m.residuals();
            let scale = m.delta_eigenvalues().last().unwrap() / m.delta_eigenvalues()[0];
            prop_assume!(scale < 1e6);
            prop_assert!(r.j_delta_j < 1e-10 * scale);
            prop_assert!(r.delta_commutes_with_j < 1e-10 * scale);
            prop_assert!(r.j_antilinear < 1e-10 * scale.sqrt());
            prop_assert!(r.j_involutive < 1e-10 * scale.sqrt());
            prop_assert!(r.flow_invariance < 1e-8);
            prop_assert!(r.spectral_pairing < 1e-9 * scale.sqrt());
            prop_assert!(r.tomita_action < 1e-10 * scale.sqrt());
        }

        #[test]
        fn vector_measure_mass_and_entropy_bounds(seed in entries(2), coeffs in prop::collection::vec(-1.0f64..1.0, 4)) {
            let l = try_subspace(2, &seed);
            prop_assume!(l.is_some());
            let l = l.unwrap();
            let Ok(m) = modular_operator(&l) else { return Ok(()) };
            let f = l.element(&DVector::from_column_slice(&coeffs));
            let mu = m.vector_spectral_measure(&f).unwrap();
            let mass = l.ambient().norm_sq(&f);
            prop_assert!((mu.total_mass() - mass).abs() < 1e-10 * mass.max(1.0));
            // f in L implies (f, delta f) = (f, f), so alpha = 0 gives zero
            let s0 = renyi_vector_entropy_from_measure(&mu, 0.0).unwrap();
            prop_assert!(s0.abs() < 1e-9 * mass.max(1.0) * m.delta_eigenvalues().last().unwrap());
            let total = vector_entropy_from_measure(&mu);
            let mut prev = s0;
            for k in 1..10 {
                let s = renyi_vector_entropy_from_measure(&mu, k as f64 / 10.0).unwrap();
                prop_assert!(s >= prev - 1e-9 * mass.max(1.0));
                prop_assert!(s <= total + 1e-9 * mass.max(1.0));
                prev = s;
            }
        }

        #[test]
        fn complement_is_symplectic_orthogonal(seed in entries(2)) {
            let l = try_subspace(2, &seed);
            prop_assume!(l.is_some());
            let l = l.unwrap();
            let lc = l.symplectic_complement().unwrap();
            let space = l.ambient();
            for a in l.basis().column_iter() {
                for b in lc.basis().column_iter() {
                    let s = space.symplectic(&a.into_owned(), &b.into_owned());
                    prop_assert!(s.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn vector_outside_l_is_rejected() {
        let tt = 0.8;
        let b = DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, tt, 1.0, 0.0]);
        let l = StandardSubspace::new(ComplexHilbertSpaceReal::canonical(2), b).unwrap();
        let m = modular_operator(&l).unwrap();
        let f = DVector::from_column_slice(&[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(m.vector_spectral_measure(&f), Err(Error::Domain(_))));
        assert!(m.vector_spectral_measure(&DVector::zeros(4)).unwrap().is_empty());
    }
}
