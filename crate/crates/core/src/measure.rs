//! Entropy functionals of discrete spectral measures.
//!
//! A [`SpectralMeasure`] is a finite set of atoms `(lambda, weight)` with
//! `lambda > 0` and `weight >= 0`. State measures (from a unit vector) have
//! total weight 1; vector measures carry total weight `(f, f)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance on `|sum(weight) - 1|` for state measures.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralMeasure {
    atoms: Vec<Atom>,
    label: String,
}

impl SpectralMeasure {
    /// Builds a measure from `(lambda, weight)` pairs, rejecting non-positive
    /// or non-finite `lambda` and negative or non-finite weights.
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(atoms: I) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(lambda, weight)| {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::Domain(format!(
                        "atom position must be positive and finite, got {lambda}"
                    )));
                }
                if !(weight >= 0.0 && weight.is_finite()) {
                    return Err(Error::Domain(format!(
                        "atom weight must be nonnegative and finite, got {weight}"
                    )));
                }
                Ok(Atom { lambda, weight })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            atoms,
            label: String::new(),
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `sum(weight * lambda)`, the squared norm of `Delta^{1/2} Psi` for state measures.
    pub fn first_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.lambda).sum()
    }

    /// Errors unless the measure is a non-empty state measure.
    pub fn check_state(&self, tolerance: f64) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::Domain("spectral measure has no atoms".into()));
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { total, tolerance });
        }
        Ok(())
    }

    /// CSV with header `lambda,weight`, 17 significant digits per entry so
    /// that [`SpectralMeasure::from_csv`] restores the atoms exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,weight\n");
        for a in &self.atoms {
            out.push_str(&format!("{:.16e},{:.16e}\n", a.lambda, a.weight));
        }
        out
    }

    /// Inverse of [`SpectralMeasure::to_csv`]. Blank lines are ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("lambda,weight") => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected header 'lambda,weight', found {other:?}"
                )))
            }
        }
        let atoms = lines
            .enumerate()
            .map(|(i, line)| {
                let field = |s: Option<&str>| -> Result<f64> {
                    s.ok_or_else(|| Error::Parse(format!("row {}: expected two fields", i + 1)))?
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))
                };
                let mut parts = line.split(',');
                let pair = (field(parts.next())?, field(parts.next())?);
                if parts.next().is_some() {
                    return Err(Error::Parse(format!("row {}: expected two fields", i + 1)));
                }
                Ok(pair)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    /// `sum(w * (lambda^r - 1))`, accurate when `r ln(lambda)` is small.
    fn shifted_moment(&self, r: f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * (r * a.lambda.ln()).exp_m1()).sum()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    Ok(())
}

/// Petz-Renyi relative entropy `ln(sum w lambda^{1-alpha}) / (alpha - 1)` of a
/// state measure.
pub fn petz_renyi_from_measure(m: &SpectralMeasure, alpha: f64) -> Result<f64> {
    petz_renyi_from_measure_with(m, alpha, NORMALIZATION_TOL)
}

/// As [`petz_renyi_from_measure`] with an explicit normalization tolerance.
pub fn petz_renyi_from_measure_with(m: &SpectralMeasure, alpha: f64, norm_tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    m.check_state(norm_tol)?;
    // ln(sum w lambda^r) = ln1p((sum w - 1) + sum w (lambda^r - 1)) keeps digits as alpha -> 1
    let shifted = (m.total_mass() - 1.0) + m.shifted_moment(1.0 - alpha);
    Ok(shifted.ln_1p() / (alpha - 1.0))
}

/// Araki-Uhlmann relative entropy `-sum w ln(lambda)`. Returns `+inf` when
/// the log-moment diverges.
pub fn relative_entropy_from_measure(m: &SpectralMeasure) -> Result<f64> {
    m.check_state(NORMALIZATION_TOL)?;
    Ok(log_moment(m))
}

/// Entropy of a vector, `-sum w ln(lambda)`, for a vector measure of any mass.
pub fn vector_entropy_from_measure(m: &SpectralMeasure) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    log_moment(m)
}

fn log_moment(m: &SpectralMeasure) -> f64 {
    let s: f64 = m.atoms.iter().map(|a| -a.weight * a.lambda.ln()).sum();
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

/// Renyi entropy of a vector, `sum w (lambda^{1-alpha} - 1) / (alpha - 1)`,
/// for a vector measure `d(f, e_lambda f)`.
pub fn renyi_vector_entropy_from_measure(m: &SpectralMeasure, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(m.shifted_moment(1.0 - alpha) / (alpha - 1.0))
}

/// `F(r) = -ln(sum w lambda^r)` for `r` in `[0, 1]`; concave in `r`.
pub fn log_moment_f(m: &SpectralMeasure, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("r must lie in [0, 1], got {r}")));
    }
    m.check_state(NORMALIZATION_TOL)?;
    let shifted = (m.total_mass() - 1.0) + m.shifted_moment(r);
    Ok(-shifted.ln_1p())
}

/// Analytically continued flow `sum w lambda^{iz}` for `-1 <= Im z <= 0`.
pub fn modular_flow_on_strip(m: &SpectralMeasure, z: Complex64) -> Result<Complex64> {
    if !(-1.0..=0.0).contains(&z.im) || !z.re.is_finite() {
        return Err(Error::Domain(format!("z = {z} lies outside the strip -1 <= Im z <= 0")));
    }
    m.check_state(NORMALIZATION_TOL)?;
    let iz = Complex64::i() * z;
    Ok(m.atoms.iter().map(|a| (iz * a.lambda.ln()).exp() * a.weight).sum())
}

/// Strictly increasing grid of Renyi parameters in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    values: Vec<f64>,
}

impl AlphaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("alpha grid is empty".into()));
        }
        if let Some(a) = values.iter().find(|a| !(0.0..1.0).contains(*a)) {
            return Err(Error::Domain(format!("alpha grid value {a} outside [0, 1)")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("alpha grid must be strictly increasing".into()));
        }
        Ok(Self { values })
    }

    /// `n` equally spaced points `k / n`, `k = 0..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new((0..n).map(|k| k as f64 / n as f64).collect())
    }

    /// The points `1 - 2^{-k}` for `k` in `ks`, approaching 1 from below.
    pub fn dyadic_approach(ks: std::ops::RangeInclusive<i32>) -> Result<Self> {
        Self::new(ks.map(|k| 1.0 - 2f64.powi(-k)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
