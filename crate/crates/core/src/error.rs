use thiserror::Error;

/// Failures reported by the entropy engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure is not normalized: total weight {total} differs from 1 by more than {tolerance}")]
    NotNormalized { total: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("subspace is not standard: {0}")]
    NotStandard(String),

    #[error("subspace is not factorial: modular operator has eigenvalue {eigenvalue} within {tolerance} of 1")]
    Factoriality { eigenvalue: f64, tolerance: f64 },

    #[error("Fock truncation inadequate: {reason}; try a cutoff of at least {suggested_cutoff}")]
    Truncation { reason: String, suggested_cutoff: usize },

    #[error("numerical evaluation did not converge: value {value}, error estimate {error_estimate}")]
    NonConvergence { value: f64, error_estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
