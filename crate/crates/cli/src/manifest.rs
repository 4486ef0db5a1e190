//! Flat `key = value` run manifests.
//!
//! ```text
//! # renyi run manifest
//! artifact_version = 0.1.0
//! model = chiral
//! status = complete
//! param.beta = 1
//! output.alpha_curve.csv = <sha256 hex>
//! ```

use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::params::{Model, ParamMap};

pub const HEADER: &str = "# renyi run manifest";
pub const FILE_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// The run stopped early; the listed outputs are partial.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub model: Model,
    pub artifact_version: String,
    pub status: Status,
    pub parameters: ParamMap,
    /// `(file name, sha256 hex digest)` in write order.
    pub outputs: Vec<(String, String)>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{HEADER}\nartifact_version = {}\nmodel = {}\n",
            self.artifact_version, self.model
        );
        match &self.status {
            Status::Complete => s.push_str("status = complete\n"),
            Status::Failed(reason) => s.push_str(&format!("status = failed: {}\n", reason.replace('\n', " "))),
        }
        for (k, v) in &self.parameters {
            s.push_str(&format!("param.{k} = {v}\n"));
        }
        for (name, digest) in &self.outputs {
            s.push_str(&format!("output.{name} = {digest}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = |reason: String| CliError::usage("manifest", reason);
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(bad(format!("missing '{HEADER}' header")));
        }
        let (mut model, mut version, mut status) = (None, None, None);
        let mut parameters = ParamMap::new();
        let mut outputs = Vec::new();
        for line in lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line
                .split_once(" = ")
                .or_else(|| line.split_once('=').map(|(k, v)| (k.trim_end(), v.trim_start())))
                .ok_or_else(|| bad(format!("malformed line '{line}'")))?;
            match k {
                "model" => model = Some(v.parse::<Model>()?),
                "artifact_version" => version = Some(v.to_string()),
                "status" => {
                    status = Some(match v.strip_prefix("failed: ") {
                        Some(reason) => Status::Failed(reason.to_string()),
                        None if v == "complete" => Status::Complete,
                        None => return Err(bad(format!("unknown status '{v}'"))),
                    })
                }
                _ => {
                    if let Some(p) = k.strip_prefix("param.") {
                        parameters.insert(p.to_string(), v.to_string());
                    } else if let Some(o) = k.strip_prefix("output.") {
                        outputs.push((o.to_string(), v.to_string()));
                    } else {
                        return Err(bad(format!("unknown key '{k}'")));
                    }
                }
            }
        }
        Ok(Self {
            model: model.ok_or_else(|| bad("missing model".into()))?,
            artifact_version: version.ok_or_else(|| bad("missing artifact_version".into()))?,
            status: status.ok_or_else(|| bad("missing status".into()))?,
            parameters,
            outputs,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let path = dir.join(FILE_NAME);
        fs::write(&path, self.to_text()).map_err(|e| CliError::io(path, e))
    }

    /// Names of outputs whose digests differ from `other` or are missing there.
    pub fn differing_outputs(&self, other: &RunManifest) -> Vec<String> {
        let mut names: Vec<String> = self
            .outputs
            .iter()
            .filter(|o| !other.outputs.contains(o))
            .map(|(n, _)| n.clone())
            .collect();
        names.extend(
            other
                .outputs
                .iter()
                .filter(|(n, _)| !self.outputs.iter().any(|(m, _)| m == n))
                .map(|(n, _)| n.clone()),
        );
        names
    }
}

/// True when `text` looks like a manifest rather than a TOML config.
pub fn is_manifest(text: &str) -> bool {
    text.lines().next().map(str::trim) == Some(HEADER)
}
