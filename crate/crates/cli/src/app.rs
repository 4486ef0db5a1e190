//! Config files, parameter precedence and manifest replay.
//!
//! Precedence is command-line flags, then the config file, then defaults.
//! A config file is either TOML with one table per model or a run manifest;
//! a manifest replays its recorded parameters and the run must reproduce
//! every recorded output digest.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::manifest::{is_manifest, RunManifest, FILE_NAME};
use crate::params::{self, Model, ParamMap};
use crate::runs;

const SECTIONS: [&str; 4] = ["chiral", "wedge", "subspace", "selftest"];

enum Config {
    Table(ParamMap),
    Replay(RunManifest),
}

fn load_config(path: &Path, model: Model) -> CliResult<Config> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if is_manifest(&text) {
        let m = RunManifest::parse(&text)?;
        if m.model != model {
            return Err(CliError::usage(
                "config",
                format!("manifest records a {} run, not {model}", m.model),
            ));
        }
        return Ok(Config::Replay(m));
    }
    let doc: toml::Table = toml::from_str(&text).map_err(|e| CliError::usage("config", e.message()))?;
    let mut section = ParamMap::new();
    for (name, value) in &doc {
        if !SECTIONS.contains(&name.as_str()) {
            return Err(CliError::usage(name, "unknown config section"));
        }
        let table = value
            .as_table()
            .ok_or_else(|| CliError::usage(name, "expected a table"))?;
        if name == model.name() {
            section = params::from_toml_table(table, name)?;
        }
    }
    Ok(Config::Table(section))
}

/// Resolves parameters and runs `model` into `out_dir`.
pub fn invoke(
    model: Model,
    flags: &ParamMap,
    config: Option<&Path>,
    out_dir: &Path,
    log: &mut dyn Write,
) -> CliResult<RunManifest> {
    let config = config.map(|p| load_config(p, model)).transpose()?;
    let file_layer = match &config {
        Some(Config::Table(t)) => t.clone(),
        Some(Config::Replay(m)) => m.parameters.clone(),
        None => ParamMap::new(),
    };
    let resolved = params::resolve(model, &[&file_layer, flags])?;
    let result = runs::execute(model, resolved, out_dir, log);
    let Some(Config::Replay(recorded)) = config else {
        return result;
    };
    let fresh = match result {
        Ok(m) => m,
        Err(CliError::SelfTestFailed(_)) => RunManifest::read(&out_dir.join(FILE_NAME))?,
        Err(e) => return Err(e),
    };
    let differing = recorded.differing_outputs(&fresh);
    if !differing.is_empty() {
        return Err(CliError::ReplayMismatch(format!(
            "outputs differ: {}",
            differing.join(", ")
        )));
    }
    if recorded.artifact_version != fresh.artifact_version {
        let _ = writeln!(
            log,
            "note: manifest written by version {}, replayed with {}",
            recorded.artifact_version, fresh.artifact_version
        );
    }
    Ok(fresh)
}
