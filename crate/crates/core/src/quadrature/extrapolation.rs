//! Polynomial (Richardson) extrapolation of a sequence to parameter zero.

use crate::error::{Error, Result};

/// Values `values[k]` sampled at strictly decreasing positive
/// `parameters[k]`, to be extrapolated to parameter 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationLadder {
    parameters: Vec<f64>,
    values: Vec<f64>,
}

impl ExtrapolationLadder {
    pub fn new(parameters: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if parameters.len() != values.len() {
            return Err(Error::Domain(format!(
                "ladder has {} parameters but {} values",
                parameters.len(),
                values.len()
            )));
        }
        if parameters.len() < 3 {
            return Err(Error::Domain("extrapolation ladder needs at least 3 rungs".into()));
        }
        if parameters.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::Domain("ladder parameters must be positive and finite".into()));
        }
        if parameters.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain("ladder parameters must be strictly decreasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("ladder values must be finite".into()));
        }
        Ok(Self { parameters, values })
    }

    /// Rungs `h_k = ratio^k * h0` for `k` in `0..n`, sampled from `f`.
    pub fn geometric<F, E>(h0: f64, ratio: f64, n: usize, mut f: F) -> std::result::Result<Self, E>
    where
        F: FnMut(f64) -> std::result::Result<f64, E>,
        E: From<Error>,
    {
        let parameters: Vec<f64> = (0..n).map(|k| h0 * ratio.powi(k as i32)).collect();
        let mut values = Vec::with_capacity(n);
        for &h in &parameters {
            values.push(f(h)?);
        }
        Ok(Self::new(parameters, values)?)
    }

    /// Rungs at the given `parameters`, sampled from `f`.
    pub fn sample<F, E>(parameters: &[f64], mut f: F) -> std::result::Result<Self, E>
    where
        F: FnMut(f64) -> std::result::Result<f64, E>,
        E: From<Error>,
    {
        let mut values = Vec::with_capacity(parameters.len());
        for &h in parameters {
            values.push(f(h)?);
        }
        Ok(Self::new(parameters.to_vec(), values)?)
    }

    pub fn parameters(&self) -> &[f64] {
        &self.parameters
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Result of [`richardson_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    /// |T(all rungs) - T(all but the last rung)|.
    pub spread: f64,
    /// The last three rungs do not approach the limit monotonically.
    pub non_monotone_tail: bool,
}

/// Neville-table extrapolation of the interpolating polynomial through all
/// rungs, evaluated at parameter 0.
pub fn richardson_limit(ladder: &ExtrapolationLadder) -> Extrapolated {
    let h = &ladder.parameters;
    let n = h.len();
    let mut table = ladder.values.clone();
    let mut diagonal = vec![table[0]];
    // after pass j, table[i] holds the extrapolant through rungs i-j..=i
    for j in 1..n {
        for i in (j..n).rev() {
            let hi = h[i];
            let hlo = h[i - j];
            table[i] = table[i] + (table[i] - table[i - 1]) * hi / (hlo - hi);
        }
        diagonal.push(table[j]);
    }
    let value = diagonal[n - 1];
    let spread = (diagonal[n - 1] - diagonal[n - 2]).abs();
    let v = &ladder.values;
    let d1 = v[n - 2] - v[n - 3];
    let d2 = v[n - 1] - v[n - 2];
    Extrapolated {
        value,
        spread,
        non_monotone_tail: d1 * d2 < 0.0,
    }
}
