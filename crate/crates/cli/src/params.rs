//! Layered run parameters: defaults, then a config-file section, then
//! command-line overrides. Every value is kept as text so that the resolved
//! map can be written to a manifest and parsed back unchanged.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

pub type ParamMap = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Chiral,
    Wedge,
    Subspace,
    Selftest,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Chiral => "chiral",
            Model::Wedge => "wedge",
            Model::Subspace => "subspace",
            Model::Selftest => "selftest",
        }
    }

    /// Accepted keys with their defaults; `None` marks a required key.
    pub fn keys(self) -> &'static [(&'static str, Option<&'static str>)] {
        const GRID: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
        match self {
            Model::Chiral => &[
                ("test_function", Some("bump 0.5 1.5")),
                ("beta", Some("1")),
                ("alpha_grid", Some(GRID)),
                ("beta_sweep", Some("0.25,0.5,1,2,4,16,64")),
                ("ladder", Some("3..=7")),
                ("tol", Some("1e-10")),
                ("seed", Some("0")),
            ],
            Model::Wedge => &[
                ("phi", Some("gauss-bump 1.5 0.5")),
                ("pi", Some("scale 0.5 gauss-bump 1.6 0.4")),
                ("mass", Some("1")),
                ("alpha_grid", Some(GRID)),
                ("ladder", Some("8..=12")),
                ("tol", Some("1e-10")),
                ("seed", Some("0")),
            ],
            Model::Subspace => &[
                ("file", None),
                ("file_sha256", Some("")),
                ("alpha_grid", Some("0,0.25,0.5,0.75,0.9")),
                ("cutoff", Some("40")),
                ("seed", Some("0")),
            ],
            Model::Selftest => &[
                ("criteria", Some("1,2,3,4,5,6,7,8,9,10")),
                ("seed", Some("20240229")),
                ("tol", Some("1e-10")),
            ],
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "chiral" => Ok(Model::Chiral),
            "wedge" => Ok(Model::Wedge),
            "subspace" => Ok(Model::Subspace),
            "selftest" => Ok(Model::Selftest),
            other => Err(CliError::usage("model", format!("unknown model '{other}'"))),
        }
    }
}

/// Merges `layers` over the defaults of `model`, later layers winning.
/// Unknown keys and missing required keys are usage errors.
pub fn resolve(model: Model, layers: &[&ParamMap]) -> CliResult<ParamMap> {
    let spec = model.keys();
    let mut out = ParamMap::new();
    for (key, default) in spec {
        if let Some(d) = default {
            out.insert((*key).to_string(), (*d).to_string());
        }
    }
    for layer in layers {
        for (k, v) in layer.iter() {
            if !spec.iter().any(|(key, _)| key == k) {
                return Err(CliError::usage(k, format!("not a parameter of the {model} model")));
            }
            out.insert(k.clone(), v.clone());
        }
    }
    for (key, default) in spec {
        if default.is_none() && !out.contains_key(*key) {
            return Err(CliError::usage(*key, "required but not given"));
        }
    }
    Ok(out)
}

/// Converts one TOML table into text parameters. Floats use the shortest
/// representation that parses back to the same value.
pub fn from_toml_table(table: &toml::Table, section: &str) -> CliResult<ParamMap> {
    fn text(v: &toml::Value, key: &str) -> CliResult<String> {
        Ok(match v {
            toml::Value::String(s) => s.clone(),
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => format!("{f:?}"),
            toml::Value::Boolean(b) => b.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|i| text(i, key))
                .collect::<CliResult<Vec<_>>>()?
                .join(","),
            other => return Err(CliError::usage(key, format!("unsupported value {other}"))),
        })
    }
    table
        .iter()
        .map(|(k, v)| Ok((k.clone(), text(v, &format!("{section}.{k}"))?)))
        .collect()
}

fn raw<'a>(map: &'a ParamMap, key: &str) -> CliResult<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::usage(key, "missing"))
}

pub fn text<'a>(map: &'a ParamMap, key: &str) -> CliResult<&'a str> {
    raw(map, key)
}

pub fn number<T: FromStr>(map: &ParamMap, key: &str) -> CliResult<T>
where
    T::Err: fmt::Display,
{
    let s = raw(map, key)?;
    s.trim()
        .parse()
        .map_err(|e| CliError::usage(key, format!("'{s}': {e}")))
}

pub fn positive(map: &ParamMap, key: &str) -> CliResult<f64> {
    let x: f64 = number(map, key)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::usage(key, format!("must be positive and finite, got {x}")));
    }
    Ok(x)
}

pub fn list<T: FromStr>(map: &ParamMap, key: &str) -> CliResult<Vec<T>>
where
    T::Err: fmt::Display,
{
    let s = raw(map, key)?;
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|e| CliError::usage(key, format!("'{item}': {e}")))
        })
        .collect()
}

/// `a..=b` with `a <= b`.
pub fn range(map: &ParamMap, key: &str) -> CliResult<RangeInclusive<i32>> {
    let s = raw(map, key)?;
    let bad = || CliError::usage(key, format!("expected 'a..=b', got '{s}'"));
    let (a, b) = s.split_once("..=").ok_or_else(bad)?;
    let (a, b): (i32, i32) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if b < a + 2 {
        return Err(CliError::usage(
            key,
            "an extrapolation ladder needs at least three rungs",
        ));
    }
    Ok(a..=b)
}

/// Relative tolerance from `tol`, combined with a model-specific absolute floor.
pub fn tolerance(map: &ParamMap, abs: f64) -> CliResult<renyi_core::quadrature::Tolerance> {
    let rel = positive(map, "tol")?;
    if rel >= 1.0 {
        return Err(CliError::usage(
            "tol",
            format!("relative tolerance must be below 1, got {rel}"),
        ));
    }
    Ok(renyi_core::quadrature::Tolerance::new(abs, rel))
}

/// Parses `key=value` override strings.
pub fn parse_assignment(s: &str) -> CliResult<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::usage("--set", format!("expected KEY=VALUE, got '{s}'")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_override_defaults() {
        let file: ParamMap = [("beta".to_string(), "2".to_string())].into();
        let flags: ParamMap = [("beta".to_string(), "3".to_string())].into();
        let m = resolve(Model::Chiral, &[&file, &flags]).unwrap();
        assert_eq!(m["beta"], "3");
        assert_eq!(m["test_function"], "bump 0.5 1.5");
        assert!(resolve(Model::Chiral, &[&[("mass".to_string(), "1".to_string())].into()]).is_err());
        assert!(matches!(resolve(Model::Subspace, &[]), Err(CliError::Usage { key, .. }) if key == "file"));
    }

    #[test]
    fn toml_values_round_trip() {
        let t: toml::Table =
            toml::from_str("beta = 1e-3\nalpha_grid = [0.1, 0.5]\nladder = \"3..=7\"\ncutoff = 30").unwrap();
        let m = from_toml_table(&t, "chiral").unwrap();
        assert_eq!(m["beta"], "0.001");
        assert_eq!(list::<f64>(&m, "alpha_grid").unwrap(), vec![0.1, 0.5]);
        assert_eq!(range(&m, "ladder").unwrap(), 3..=7);
        assert_eq!(number::<usize>(&m, "cutoff").unwrap(), 30);
    }

    #[test]
    fn bad_values_name_their_key() {
        let m: ParamMap = [("beta".to_string(), "-1".to_string())].into();
        assert!(matches!(positive(&m, "beta"), Err(CliError::Usage { key, .. }) if key == "beta"));
        let m: ParamMap = [("ladder".to_string(), "3..=4".to_string())].into();
        assert!(range(&m, "ladder").is_err());
    }
}
