//! Free massive scalar field in the right Rindler wedge of 1+1 dimensional
//! Minkowski space, vacuum state, coherent excitations described by the
//! time-zero Cauchy data `(phi, pi) = (Ef, d_0 Ef)|_{x^0 = 0}`.
//!
//! With `h = 1 - alpha`, `c = cos(pi h)`, `s = sin(pi h)` and the transforms
//! `T_a(p) = ∫ a(x) e^{i p x} dx`, `A_a(p) = ∫ a(x) e^{i c p x - s w_p x} dx`
//! the Renyi entropy is the single absolutely convergent momentum integral
//!
//! `S_alpha = (1 / (2 pi h)) ∫_0^inf dp / w_p [ |T_pi|^2 + w_p^2 |T_phi|^2
//!            - |A_pi|^2 - (c^2 w_p^2 + s^2 p^2) |A_phi|^2 ]`.
//!
//! The mixed `phi pi` terms drop out because the equal-time kernel
//! `d_{x^0} K_alpha` is odd in `p`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{
    composite_kronrod, damped_momentum_integral, decaying_half_line_integral, integrate_1d, richardson_limit,
    DampedTail, Extrapolated, ExtrapolationLadder, Interval, Tolerance,
};
use crate::testfn::SmoothFunction;
use crate::Estimate;

/// Default accuracy request for wedge integrals.
pub const DEFAULT_TOLERANCE: Tolerance = Tolerance { abs: 1e-13, rel: 1e-10 };

/// Boost by rapidity `2 pi t` in the `x^1` direction, acting on `(x^0, x^1)`.
pub fn boost(t: f64, x: [f64; 2]) -> [f64; 2] {
    let (sh, ch) = ((2.0 * PI * t).sinh(), (2.0 * PI * t).cosh());
    [ch * x[0] + sh * x[1], sh * x[0] + ch * x[1]]
}

/// `-(x^0)^2 + (x^1)^2`.
pub fn minkowski_square(x: [f64; 2]) -> f64 {
    x[1] * x[1] - x[0] * x[0]
}

/// Complex boost parameters `z`, `w` of the continued kernel `omega_2(Lambda_z x, Lambda_w y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParameters {
    pub z: Complex64,
    pub w: Complex64,
}

impl BoostParameters {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z, w }
    }

    /// The continuation point `z = i h / 2`, `w = -i h / 2` reached by `S_alpha`.
    pub fn for_alpha(alpha: f64) -> Self {
        let h = 1.0 - alpha;
        Self::new(Complex64::new(0.0, 0.5 * h), Complex64::new(0.0, -0.5 * h))
    }

    /// `Im z` in `[0, 1/2]` and `Im w` in `[-1/2, 0]`.
    pub fn in_strip(&self) -> bool {
        (0.0..=0.5).contains(&self.z.im) && (-0.5..=0.0).contains(&self.w.im)
    }
}

/// Phase `H(x, y, z, w, p)` of the boosted two-point kernel, `e^{i H}` being
/// the momentum-space integrand up to `1 / (2 w_p)`.
pub fn boosted_phase(x: [f64; 2], y: [f64; 2], params: BoostParameters, p: f64, mass: f64) -> Complex64 {
    let om = (p * p + mass * mass).sqrt();
    let (ch_z, sh_z) = ((2.0 * PI * params.z).cosh(), (2.0 * PI * params.z).sinh());
    let (ch_w, sh_w) = ((2.0 * PI * params.w).cosh(), (2.0 * PI * params.w).sinh());
    ch_z * (om * x[0] - p * x[1]) + sh_z * (om * x[1] - p * x[0])
        - ch_w * (om * y[0] - p * y[1])
        - sh_w * (om * y[1] - p * y[0])
}

fn in_right_wedge(x: [f64; 2]) -> bool {
    x[1] >= x[0].abs()
}

/// Whether `(z, w)` lies in the strip where the boosted kernel is bounded.
///
/// For admissible parameters this also samples `Im H` on a momentum grid
/// and checks that it is nonnegative, so that `|e^{i H}| = e^{-Im H} <= 1`.
/// Points outside the closed right wedge are a domain error.
pub fn strip_admissibility(params: BoostParameters, x: [f64; 2], y: [f64; 2]) -> Result<bool> {
    if !in_right_wedge(x) || !in_right_wedge(y) {
        return Err(Error::Domain(format!(
            "points {x:?}, {y:?} are not in the closed right wedge"
        )));
    }
    if !params.in_strip() {
        return Ok(false);
    }
    let scale = 1.0 + x[0].abs() + x[1].abs() + y[0].abs() + y[1].abs();
    let growth = (2.0 * PI * (params.z.re.abs() + params.w.re.abs())).cosh();
    for k in -200..=200 {
        let p = (k as f64 / 20.0).sinh();
        let im = boosted_phase(x, y, params, p, 1.0).im;
        if im < -1e-12 * scale * growth * (1.0 + p.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Modified Bessel functions `K_0` and `K_1` for `z > 0`, from
/// `K_nu(z) = ∫_0^inf e^{-z cosh t} cosh(nu t) dt`.
pub fn bessel_k(nu: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("K_nu(z) needs z > 0, got {z}")));
    }
    // the integrand drops below e^{-745} beyond this point
    let upper = (745.0 / z).max(1.0).acosh() + 1.0;
    let nu = nu as f64;
    let r = integrate_1d(
        |t: f64| (-z * t.cosh()).exp() * (nu * t).cosh(),
        Interval::new(0.0, upper),
        Tolerance::new(1e-300, 1e-13),
    )
    .into_result()?;
    Ok(r.value)
}

/// Which equal-time derivative of `K_alpha` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPart {
    /// `K_alpha(x, y)`.
    Value,
    /// `d_{x^0} K_alpha(x, y)`.
    Dt,
    /// `d_{x^0} d_{y^0} K_alpha(x, y)`.
    DtDt,
}

/// Equal-time symmetric kernel `K_alpha` of the Renyi entropy at spatial
/// points `x1 != y1` in the right half line.
///
/// The continued part is a momentum integral damped by
/// `e^{-sin(pi alpha) w_p (x1 + y1)}`; the uncontinued part is subtracted in
/// closed form (`K_0(m d) / pi` and `-m K_1(m d) / (pi d)`), since at equal
/// times it is a conditionally convergent oscillatory integral. Both diverge
/// on the diagonal, which is therefore excluded. The time derivative
/// vanishes identically because its momentum integrand is odd.
pub fn k_alpha_equal_time(x1: f64, y1: f64, alpha: f64, mass: f64, part: KernelPart, tol: Tolerance) -> Result<f64> {
    check_alpha(alpha)?;
    check_mass(mass)?;
    if !(x1 > 0.0 && y1 > 0.0) {
        return Err(Error::Domain(format!("kernel points must be positive, got {x1}, {y1}")));
    }
    let d = (x1 - y1).abs();
    if part == KernelPart::Dt {
        return Ok(0.0);
    }
    if d == 0.0 {
        return Err(Error::Domain(
            "the equal-time kernel diverges on the diagonal x1 = y1".into(),
        ));
    }
    let h = 1.0 - alpha;
    let (c, s) = ((PI * h).cos(), (PI * h).sin());
    let sum = x1 + y1;
    let rate = s * sum;
    let continued = match part {
        KernelPart::Value => damped_momentum_integral(
            |p: f64| {
                let om = (p * p + mass * mass).sqrt();
                (c * p * d).cos() * (-s * om * sum).exp() / om
            },
            DampedTail::new(rate, (-s * mass * sum).exp() / mass).even(),
            tol,
        )?,
        _ => damped_momentum_integral(
            |p: f64| {
                let om = (p * p + mass * mass).sqrt();
                (c * c * om * om + s * s * p * p) * (c * p * d).cos() * (-s * om * sum).exp() / om
            },
            DampedTail::new(0.5 * rate, mass + 2.0 / (std::f64::consts::E * rate)).even(),
            tol,
        )?,
    }
    .into_result()?;
    // the even tail doubles the half line
    let continued = 0.5 * continued.value;
    let base = match part {
        KernelPart::Value => bessel_k(0, mass * d)?,
        _ => -mass * bessel_k(1, mass * d)? / d,
    };
    Ok((continued - base) / (PI * (alpha - 1.0)))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass must be positive and finite, got {mass}")));
    }
    Ok(())
}

/// Time-zero Cauchy data of `Ef` for a field of mass `m`, supported in the
/// open right half line.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeCauchyData {
    phi: SmoothFunction,
    pi: SmoothFunction,
    mass: f64,
}

impl WedgeCauchyData {
    pub fn new(phi: SmoothFunction, pi: SmoothFunction, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        for (name, f) in [("phi", &phi), ("pi", &pi)] {
            if let Some((a, _)) = f.support() {
                if !(a > 0.0) {
                    return Err(Error::Domain(format!(
                        "{name} must be supported in x > 0, starts at {a}"
                    )));
                }
            }
        }
        Ok(Self { phi, pi, mass })
    }

    pub fn zero(mass: f64) -> Result<Self> {
        Self::new(SmoothFunction::zero(), SmoothFunction::zero(), mass)
    }

    /// The reference data set: `phi = gauss-bump(1.5, 0.5)`,
    /// `pi = 0.5 gauss-bump(1.6, 0.4)`, mass 1.
    pub fn standard() -> Self {
        Self::new(
            SmoothFunction::gauss_bump(1.5, 0.5).expect("valid"),
            SmoothFunction::gauss_bump(1.6, 0.4).expect("valid").scaled(0.5),
            1.0,
        )
        .expect("valid")
    }

    pub fn phi(&self) -> &SmoothFunction {
        &self.phi
    }

    pub fn pi(&self) -> &SmoothFunction {
        &self.pi
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            phi: self.phi.clone().scaled(c),
            pi: self.pi.clone().scaled(c),
            mass: self.mass,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.pi.is_zero()
    }

    /// Smallest interval containing both supports.
    pub fn support(&self) -> Option<(f64, f64)> {
        match (self.phi.support(), self.pi.support()) {
            (None, None) => None,
            (Some(s), None) | (None, Some(s)) => Some(s),
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        }
    }

    fn relative_uncertainty(&self) -> f64 {
        self.phi.relative_uncertainty().max(self.pi.relative_uncertainty())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self
            .phi
            .breakpoints()
            .into_iter()
            .chain(self.pi.breakpoints())
            .collect();
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }
}

/// Fourier-type transforms of the data on composite rules fine enough to
/// resolve `e^{i p x}` over the support, cached per resolution level.
struct Transforms<'a> {
    data: &'a WedgeCauchyData,
    lo: f64,
    hi: f64,
    levels: RefCell<Vec<Vec<[f64; 4]>>>,
}

/// Panels of the coarsest transform rule.
const BASE_PANELS: usize = 64;

impl<'a> Transforms<'a> {
    fn new(data: &'a WedgeCauchyData, (lo, hi): (f64, f64)) -> Self {
        Self {
            data,
            lo,
            hi,
            levels: RefCell::new(Vec::new()),
        }
    }

    /// Nodes `[x, weight, phi(x), pi(x)]` with at most about one radian of phase per panel.
    fn with_nodes<R>(&self, p: f64, f: impl FnOnce(&[[f64; 4]]) -> R) -> R {
        let needed = p.abs() * (self.hi - self.lo) + 16.0;
        let mut level = 0;
        while ((BASE_PANELS << level) as f64) < needed {
            level += 1;
        }
        let mut levels = self.levels.borrow_mut();
        while levels.len() <= level {
            let panels = BASE_PANELS << levels.len();
            let nodes = composite_kronrod(self.lo, self.hi, panels)
                .into_iter()
                .map(|(x, w)| [x, w, self.data.phi.value(x), self.data.pi.value(x)])
                .collect();
            levels.push(nodes);
        }
        f(&levels[level])
    }

    /// `(T_phi, T_pi, A_phi, A_pi)` at momentum `p` for the continuation `(c, s)`.
    fn at(&self, p: f64, c: f64, s: f64) -> [Complex64; 4] {
        let om = (p * p + self.data.mass * self.data.mass).sqrt();
        self.with_nodes(p, |nodes| {
            let mut out = [Complex64::new(0.0, 0.0); 4];
            for &[x, w, phi, pi] in nodes {
                let t = Complex64::from_polar(w, p * x);
                let a = Complex64::from_polar(w * (-s * om * x).exp(), c * p * x);
                out[0] += t * phi;
                out[1] += t * pi;
                out[2] += a * phi;
                out[3] += a * pi;
            }
            out
        })
    }
}

/// Petz-Renyi relative entropy `S_alpha(W(f) Omega || Omega)` of the wedge
/// algebra for `alpha` in `(0, 1)`, assembled in momentum space.
///
/// The continued and uncontinued contributions are combined in one
/// integrand before quadrature. The momentum half line is summed in
/// doubling blocks until the contribution is negligible; the last block
/// enters the error estimate.
pub fn petz_renyi_wedge(data: &WedgeCauchyData, alpha: f64, tol: Tolerance) -> Result<Estimate> {
    check_alpha(alpha)?;
    let Some(hull) = data.support() else {
        return Ok(Estimate::exact(0.0));
    };
    let h = 1.0 - alpha;
    let (c, s) = ((PI * h).cos(), (PI * h).sin());
    let m = data.mass;
    let transforms = Transforms::new(data, hull);
    let prefactor = 1.0 / (2.0 * PI * h);
    let p0 = (4.0 * PI / (hull.1 - hull.0)).max(m);
    let r = decaying_half_line_integral(
        |p| {
            let om = (p * p + m * m).sqrt();
            let [t_phi, t_pi, a_phi, a_pi] = transforms.at(p, c, s);
            (t_pi.norm_sqr() + om * om * t_phi.norm_sqr()
                - a_pi.norm_sqr()
                - (c * c * om * om + s * s * p * p) * a_phi.norm_sqr())
                / om
        },
        p0,
        4,
        Tolerance::new(tol.abs / prefactor, tol.rel),
    );
    let value = prefactor * r.value;
    let error = prefactor * r.error_estimate + 2.0 * data.relative_uncertainty() * value.abs();
    if !r.converged {
        return Err(Error::NonConvergence {
            value,
            error_estimate: error,
        });
    }
    Ok(Estimate::new(value, error))
}

/// Relative entropy as the boost Noether charge
/// `∫ pi x [pi(x)^2 + phi'(x)^2 + m^2 phi(x)^2] dx`.
pub fn relative_entropy_wedge(data: &WedgeCauchyData, tol: Tolerance) -> Result<Estimate> {
    if data.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let m2 = data.mass * data.mass;
    let knots = data.breakpoints();
    let pieces = knots.len().saturating_sub(1).max(1);
    let mut value = 0.0;
    let mut error = 0.0;
    for w in knots.windows(2) {
        let r = integrate_1d(
            |x: f64| {
                let (phi, dphi, pi) = (data.phi.value(x), data.phi.derivative(x), data.pi.value(x));
                PI * x * (pi * pi + dphi * dphi + m2 * phi * phi)
            },
            Interval::new(w[0], w[1]),
            tol.split(pieces).scaled(1.0 / PI),
        )
        .into_result()?;
        value += r.value;
        error += r.error_estimate;
    }
    error += 2.0 * data.relative_uncertainty() * value;
    Ok(Estimate::new(value, error))
}

/// Richardson extrapolation of `S_alpha` along `alpha = 1 - 2^{-k}`, `k` in `ks`.
pub fn petz_renyi_wedge_alpha_limit(
    data: &WedgeCauchyData,
    ks: std::ops::RangeInclusive<i32>,
    tol: Tolerance,
) -> Result<Extrapolated> {
    let hs: Vec<f64> = ks.map(|k| 2f64.powi(-k)).collect();
    let ladder = ExtrapolationLadder::sample(&hs, |h| Ok::<f64, Error>(petz_renyi_wedge(data, 1.0 - h, tol)?.value))?;
    Ok(richardson_limit(&ladder))
}

/// Smeared equal-time commutator relations of the causal propagator `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// `|∬ E(x, y) g(x) h(y)|` at `x^0 = y^0`.
    pub equal_time: f64,
    /// `|∬ d_{x^0} E(x, y) g(x) h(y) - ∫ g h|`.
    pub time_derivative: f64,
    /// `|E(g, h) + E(h, g)|`.
    pub antisymmetry: f64,
}

impl CommutatorReport {
    pub fn max_residual(&self) -> f64 {
        self.equal_time.max(self.time_derivative).max(self.antisymmetry)
    }
}

/// Checks `E|_{x^0 = y^0} = 0` and `d_{x^0} E|_{x^0 = y^0} = delta(x - y)` in
/// smeared form against the bumps `g`, `h`, integrating the momentum
/// representation over the whole line without using its parity.
pub fn commutator_kernel_checks(
    mass: f64,
    g: &SmoothFunction,
    h: &SmoothFunction,
    tol: Tolerance,
) -> Result<CommutatorReport> {
    check_mass(mass)?;
    let (Some(sg), Some(sh)) = (g.support(), h.support()) else {
        return Ok(CommutatorReport {
            equal_time: 0.0,
            time_derivative: 0.0,
            antisymmetry: 0.0,
        });
    };
    let hull = (sg.0.min(sh.0), sg.1.max(sh.1));
    let nodes: Vec<(f64, f64, f64, f64)> = composite_kronrod(hull.0, hull.1, 512)
        .into_iter()
        .map(|(x, w)| (x, w, g.value(x), h.value(x)))
        .collect();
    let transform = |p: f64| -> (Complex64, Complex64) {
        nodes.iter().fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(tg, th), &(x, w, gx, hx)| {
                let e = Complex64::from_polar(w, p * x);
                (tg + e * gx, th + e * hx)
            },
        )
    };
    let p0 = 4.0 * PI / (hull.1 - hull.0);
    // E(g, h) = ∫ dp / (2 pi w) (-Im(T_g conj T_h)) and d_0 E(g, h) = ∫ dp / (2 pi) Re(T_g conj T_h), over p in R
    let whole_line = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let pos = decaying_half_line_integral(f, p0, 4, tol).into_result()?;
        let neg = decaying_half_line_integral(|p| f(-p), p0, 4, tol).into_result()?;
        Ok((pos.value + neg.value) / (2.0 * PI))
    };
    let e_gh = whole_line(&|p| {
        let (tg, th) = transform(p);
        -(tg * th.conj()).im / (p * p + mass * mass).sqrt()
    })?;
    let e_hg = whole_line(&|p| {
        let (tg, th) = transform(p);
        -(th * tg.conj()).im / (p * p + mass * mass).sqrt()
    })?;
    let de_gh = whole_line(&|p| {
        let (tg, th) = transform(p);
        (tg * th.conj()).re
    })?;
    let overlap: f64 = nodes.iter().map(|&(_, w, gx, hx)| w * gx * hx).sum();
    Ok(CommutatorReport {
        equal_time: e_gh.abs(),
        time_derivative: (de_gh - overlap).abs(),
        antisymmetry: (e_gh + e_hg).abs(),
    })
}
