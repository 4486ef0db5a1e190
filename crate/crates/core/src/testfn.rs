//! Smooth compactly supported profiles with analytically known derivatives.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Shape of a profile before the overall scale factor.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    /// `exp(-1 / ((x - a)(b - x)))` on `(a, b)`.
    Bump {
        a: f64,
        b: f64,
    },
    /// `((x - a)(b - x))^k` on `(a, b)`, `k >= 2`.
    PolyBump {
        a: f64,
        b: f64,
        k: u32,
    },
    /// `exp(1 - 1 / (1 - r^2))` with `r = (x - center) / width`.
    GaussBump {
        center: f64,
        width: f64,
    },
    /// Piecewise cubic Hermite interpolant of samples.
    Sampled(Arc<HermiteSpline>),
}

/// A smooth compactly supported real function `scale * profile(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothFunction {
    profile: Profile,
    scale: f64,
}

impl SmoothFunction {
    pub fn zero() -> Self {
        Self {
            profile: Profile::Zero,
            scale: 0.0,
        }
    }

    pub fn bump(a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        Ok(Self::from_profile(Profile::Bump { a, b }))
    }

    pub fn poly_bump(a: f64, b: f64, k: u32) -> Result<Self> {
        check_interval(a, b)?;
        if k < 2 {
            return Err(Error::Domain(format!("poly-bump exponent must be at least 2, got {k}")));
        }
        Ok(Self::from_profile(Profile::PolyBump { a, b, k }))
    }

    pub fn gauss_bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite()) {
            return Err(Error::Domain(format!(
                "gauss-bump needs a finite centre and positive width, got {center}, {width}"
            )));
        }
        Ok(Self::from_profile(Profile::GaussBump { center, width }))
    }

    pub fn sampled(spline: HermiteSpline) -> Self {
        Self::from_profile(Profile::Sampled(Arc::new(spline)))
    }

    fn from_profile(profile: Profile) -> Self {
        Self { profile, scale: 1.0 }
    }

    /// Parses `zero`, `bump a b`, `poly-bump a b k` or `gauss-bump c w`,
    /// optionally prefixed by `scale c`, e.g. `scale 2 bump 0.5 1.5`.
    pub fn parse(spec: &str) -> Result<Self> {
        let words: Vec<&str> = spec.split_whitespace().collect();
        let num = |i: usize| -> Result<f64> {
            words
                .get(i)
                .ok_or_else(|| Error::Parse(format!("'{spec}': missing argument {i}")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("'{spec}': argument {i}: {e}")))
        };
        let arity = |n: usize| -> Result<()> {
            if words.len() != n {
                return Err(Error::Parse(format!("'{spec}': expected {} arguments", n - 1)));
            }
            Ok(())
        };
        match words.first().copied() {
            Some("scale") => {
                let c = num(1)?;
                let rest = words[2..].join(" ");
                Ok(Self::parse(&rest)?.scaled(c))
            }
            Some("zero") => {
                arity(1)?;
                Ok(Self::zero())
            }
            Some("bump") => {
                arity(3)?;
                Self::bump(num(1)?, num(2)?)
            }
            Some("poly-bump") => {
                arity(4)?;
                let k = num(3)?;
                if k.fract() != 0.0 || k < 0.0 {
                    return Err(Error::Parse(format!(
                        "'{spec}': exponent must be a nonnegative integer"
                    )));
                }
                Self::poly_bump(num(1)?, num(2)?, k as u32)
            }
            Some("gauss-bump") => {
                arity(3)?;
                Self::gauss_bump(num(1)?, num(2)?)
            }
            _ => Err(Error::Parse(format!("unknown test function '{spec}'"))),
        }
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0 || self.profile == Profile::Zero
    }

    /// Closed interval outside which the function vanishes; `None` for zero.
    pub fn support(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            return None;
        }
        match &self.profile {
            Profile::Zero => None,
            Profile::Bump { a, b } | Profile::PolyBump { a, b, .. } => Some((*a, *b)),
            Profile::GaussBump { center, width } => Some((center - width, center + width)),
            Profile::Sampled(s) => Some(s.range()),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.scale
            * match &self.profile {
                Profile::Zero => 0.0,
                Profile::Bump { a, b } => {
                    if x <= *a || x >= *b {
                        0.0
                    } else {
                        (-1.0 / ((x - a) * (b - x))).exp()
                    }
                }
                Profile::PolyBump { a, b, k } => {
                    if x <= *a || x >= *b {
                        0.0
                    } else {
                        ((x - a) * (b - x)).powi(*k as i32)
                    }
                }
                Profile::GaussBump { center, width } => {
                    let r = (x - center) / width;
                    if r.abs() >= 1.0 {
                        0.0
                    } else {
                        (1.0 - 1.0 / (1.0 - r * r)).exp()
                    }
                }
                Profile::Sampled(s) => s.value(x),
            }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.scale
            * match &self.profile {
                Profile::Zero => 0.0,
                Profile::Bump { a, b } => {
                    if x <= *a || x >= *b {
                        0.0
                    } else {
                        let q = (x - a) * (b - x);
                        (-1.0 / q).exp() * (a + b - 2.0 * x) / (q * q)
                    }
                }
                Profile::PolyBump { a, b, k } => {
                    if x <= *a || x >= *b {
                        0.0
                    } else {
                        let q = (x - a) * (b - x);
                        *k as f64 * q.powi(*k as i32 - 1) * (a + b - 2.0 * x)
                    }
                }
                Profile::GaussBump { center, width } => {
                    let r = (x - center) / width;
                    if r.abs() >= 1.0 {
                        0.0
                    } else {
                        let q = 1.0 - r * r;
                        (1.0 - 1.0 / q).exp() * (-2.0 * r / (q * q)) / width
                    }
                }
                Profile::Sampled(s) => s.derivative(x),
            }
    }

    /// Relative accuracy of the profile itself: 0 for closed forms, the
    /// interpolation estimate for sampled data.
    pub fn relative_uncertainty(&self) -> f64 {
        match &self.profile {
            Profile::Sampled(s) => s.relative_error(),
            _ => 0.0,
        }
    }

    /// Breakpoints inside the support where an integrand built from this
    /// function is only piecewise smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.profile {
            Profile::Sampled(s) => s.knots().to_vec(),
            _ => self.support().map(|(a, b)| vec![a, b]).unwrap_or_default(),
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!(
            "support [{a}, {b}] is not a finite nonempty interval"
        )));
    }
    Ok(())
}

/// Test function of the chiral model: smooth, supported in a compact
/// subinterval of the open half line `(0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineTestFunction {
    inner: SmoothFunction,
}

impl HalfLineTestFunction {
    pub fn new(inner: SmoothFunction) -> Result<Self> {
        if let Some((a, _)) = inner.support() {
            if !(a > 0.0) {
                return Err(Error::Domain(format!("support must lie in (0, inf), starts at {a}")));
            }
        }
        Ok(Self { inner })
    }

    pub fn zero() -> Self {
        Self {
            inner: SmoothFunction::zero(),
        }
    }

    pub fn bump(a: f64, b: f64) -> Result<Self> {
        Self::new(SmoothFunction::bump(a, b)?)
    }

    pub fn poly_bump(a: f64, b: f64, k: u32) -> Result<Self> {
        Self::new(SmoothFunction::poly_bump(a, b, k)?)
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(SmoothFunction::parse(spec)?)
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            inner: self.inner.scaled(c),
        }
    }

    pub fn function(&self) -> &SmoothFunction {
        &self.inner
    }

    pub fn value(&self, u: f64) -> f64 {
        self.inner.value(u)
    }

    pub fn derivative(&self, u: f64) -> f64 {
        self.inner.derivative(u)
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.inner.support()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

/// Piecewise cubic Hermite interpolant through `(x_i, y_i, y'_i)`, zero
/// outside `[x_0, x_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
    relative_error: f64,
}

impl HermiteSpline {
    /// Interpolant of values and derivatives. The interpolation error is
    /// estimated by comparing with the interpolant of every other sample.
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() != dy.len() {
            return Err(Error::Domain("sample columns have different lengths".into()));
        }
        if x.len() < 5 {
            return Err(Error::Domain("at least 5 samples are needed".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(&y).chain(&dy).any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "sample abscissae must be finite and strictly increasing".into(),
            ));
        }
        let mut spline = Self {
            x,
            y,
            dy,
            relative_error: 0.0,
        };
        spline.relative_error = spline.estimate_error();
        Ok(spline)
    }

    /// Interpolant of values only, with slopes from centred differences.
    pub fn from_values(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 5 {
            return Err(Error::Domain("need at least 5 samples with matching columns".into()));
        }
        let n = x.len();
        let dy = (0..n)
            .map(|i| {
                let (l, r) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (y[r] - y[l]) / (x[r] - x[l])
            })
            .collect();
        Self::new(x, y, dy)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn relative_error(&self) -> f64 {
        self.relative_error
    }

    fn locate(&self, t: f64) -> Option<usize> {
        let (lo, hi) = self.range();
        if t < lo || t > hi {
            return None;
        }
        let i = self.x.partition_point(|&k| k <= t).saturating_sub(1);
        Some(i.min(self.x.len() - 2))
    }

    pub fn value(&self, t: f64) -> f64 {
        let Some(i) = self.locate(t) else { return 0.0 };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * self.y[i] + h * h10 * self.dy[i] + h01 * self.y[i + 1] + h * h11 * self.dy[i + 1]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let Some(i) = self.locate(t) else { return 0.0 };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let d00 = 6.0 * s * (s - 1.0);
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d01 = -d00;
        let d11 = s * (3.0 * s - 2.0);
        (d00 * self.y[i] + d01 * self.y[i + 1]) / h + d10 * self.dy[i] + d11 * self.dy[i + 1]
    }

    /// Relative L2 difference of derivatives between this interpolant and
    /// the one through every other sample, sampled at this grid's midpoints.
    fn estimate_error(&self) -> f64 {
        let keep: Vec<usize> = (0..self.x.len())
            .step_by(2)
            .chain(std::iter::once(self.x.len() - 1))
            .collect();
        let mut keep = keep;
        keep.dedup();
        let coarse = Self {
            x: keep.iter().map(|&i| self.x[i]).collect(),
            y: keep.iter().map(|&i| self.y[i]).collect(),
            dy: keep.iter().map(|&i| self.dy[i]).collect(),
            relative_error: 0.0,
        };
        let (mut diff, mut norm) = (0.0, 0.0);
        for w in self.x.windows(2) {
            let h = w[1] - w[0];
            for s in [0.25, 0.5, 0.75] {
                let t = w[0] + s * h;
                let fine = self.derivative(t);
                diff += h * (fine - coarse.derivative(t)).powi(2);
                norm += h * fine * fine;
            }
        }
        if norm == 0.0 {
            0.0
        } else {
            (diff / norm).sqrt()
        }
    }
}
