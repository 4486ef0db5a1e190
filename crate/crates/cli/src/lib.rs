//! Command-line driver for the entropy engine: parameter layering, model
//! runs with CSV outputs, run manifests and the acceptance self-test.

pub mod acceptance;
pub mod app;
pub mod error;
pub mod manifest;
pub mod output;
pub mod params;
pub mod runs;
pub mod subspace_file;

pub use error::{exit, CliError, CliResult};

/// Version recorded in every manifest.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
