//! Petz-Renyi and Araki-Uhlmann relative entropies of coherent excitations
//! in free bosonic models.
//!
//! * [`measure`]: entropy functionals of discrete spectral measures.
//! * [`subspace`]: exact modular theory of finite-dimensional standard subspaces.
//! * [`fock`]: truncated Fock-space brute force used as an independent oracle.
//! * [`chiral`]: thermal chiral current on the half light-ray.
//! * [`wedge`]: massive scalar in the 1+1 dimensional Rindler wedge.
//! * [`corpus`]: seeded random measures, subspaces and vectors.
//! * [`quadrature`]: the integration engine shared by the field models.

// `!(x > 0.0)` guards reject NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// occupation tables are indexed in lockstep with coefficient arrays
#![allow(clippy::needless_range_loop)]

pub mod chiral;
pub mod corpus;
pub mod error;
pub mod fock;
pub mod measure;
pub mod quadrature;
pub mod subspace;
pub mod testfn;
pub mod wedge;

pub use error::{Error, Result};

/// A computed real number together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

impl Estimate {
    pub fn new(value: f64, error_estimate: f64) -> Self {
        Self { value, error_estimate }
    }

    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
        }
    }
}
