//! TOML description of a finite-mode standard subspace and a vector in it.
//!
//! ```toml
//! dim = 2                                  # complex dimension n
//! basis = [[1, 0, 0, 0], [0, 0.8, 1, 0]]   # real vectors of length 2n spanning L
//! coefficients = [0.3, -0.2]               # f = sum_k c_k basis_k
//! # optional, default g = 1 and J (a, b) = (-b, a) per coordinate pair:
//! # metric = [[...], ...]                  # 2n rows of length 2n
//! # complex_structure = [[...], ...]
//! ```

use nalgebra::{DMatrix, DVector};
use renyi_core::subspace::{ComplexHilbertSpaceReal, StandardSubspace};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    dim: usize,
    basis: Vec<Vec<f64>>,
    coefficients: Vec<f64>,
    metric: Option<Vec<Vec<f64>>>,
    complex_structure: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone)]
pub struct SubspaceInput {
    pub subspace: StandardSubspace,
    pub vector: DVector<f64>,
}

fn square(rows: &[Vec<f64>], d: usize, key: &str) -> CliResult<DMatrix<f64>> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(CliError::usage(key, format!("expected {d} rows of length {d}")));
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

pub fn parse(text: &str) -> CliResult<SubspaceInput> {
    let raw: Raw = toml::from_str(text).map_err(|e| CliError::usage("file", e.message()))?;
    if raw.dim == 0 {
        return Err(CliError::usage("dim", "must be positive"));
    }
    let d = 2 * raw.dim;
    let ambient = match (&raw.metric, &raw.complex_structure) {
        (None, None) => ComplexHilbertSpaceReal::canonical(raw.dim),
        (Some(g), Some(j)) => ComplexHilbertSpaceReal::new(square(g, d, "metric")?, square(j, d, "complex_structure")?)
            .map_err(|e| CliError::usage("metric", e))?,
        _ => {
            return Err(CliError::usage(
                "metric",
                "metric and complex_structure must be given together",
            ))
        }
    };
    if raw.basis.is_empty() || raw.basis.iter().any(|v| v.len() != d) {
        return Err(CliError::usage(
            "basis",
            format!("expected a nonempty list of vectors of length {d}"),
        ));
    }
    if raw.coefficients.len() != raw.basis.len() {
        return Err(CliError::usage(
            "coefficients",
            format!("expected {} coefficients, one per basis vector", raw.basis.len()),
        ));
    }
    let basis = DMatrix::from_fn(d, raw.basis.len(), |i, k| raw.basis[k][i]);
    let subspace = StandardSubspace::new(ambient, basis)?;
    let vector = subspace.element(&DVector::from_vec(raw.coefficients));
    Ok(SubspaceInput { subspace, vector })
}
