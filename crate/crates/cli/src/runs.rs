//! Model runs. Every parameter is parsed and validated before the output
//! directory is touched, so a usage error leaves no artifacts behind. The
//! manifest is written last; a run that fails midway still writes one, with
//! a `failed` status and the digests of whatever it managed to produce.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use renyi_core::chiral::{self, *};
use renyi_core::fock::FockOracle;
use renyi_core::measure::{renyi_vector_entropy_from_measure, vector_entropy_from_measure, AlphaGrid};
use renyi_core::quadrature::Tolerance;
use renyi_core::subspace::{modular_operator, vector_spectral_measure};
use renyi_core::testfn::{HalfLineTestFunction, SmoothFunction};
use renyi_core::wedge::{self, *};
use renyi_core::Estimate;

use crate::acceptance::{self, Settings};
use crate::error::{CliError, CliResult};
use crate::manifest::{RunManifest, Status};
use crate::output::{sha256_hex, Field, OutputSet};
use crate::params::{self, Model, ParamMap};
use crate::subspace_file::{self, SubspaceInput};
use crate::ARTIFACT_VERSION;

/// Alpha grids stop short of 1; the endpoint row comes from the closed form.
fn alpha_grid(map: &ParamMap) -> CliResult<Vec<f64>> {
    let values: Vec<f64> = params::list(map, "alpha_grid")?;
    if values.iter().any(|&a| a >= 1.0) {
        return Err(CliError::usage(
            "alpha_grid",
            "values must lie below 1; the alpha = 1 row is computed from the closed form",
        ));
    }
    AlphaGrid::new(values)
        .map(|g| g.values().to_vec())
        .map_err(|e| CliError::usage("alpha_grid", e))
}

fn typed<T>(key: &str, r: renyi_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::usage(key, e))
}

struct ChiralPlan {
    f: HalfLineTestFunction,
    beta: f64,
    grid: Vec<f64>,
    sweep: Vec<f64>,
    ladder: RangeInclusive<i32>,
    tol: Tolerance,
}

struct WedgePlan {
    data: WedgeCauchyData,
    grid: Vec<f64>,
    ladder: RangeInclusive<i32>,
    tol: Tolerance,
}

struct SubspacePlan {
    input: SubspaceInput,
    grid: Vec<f64>,
    cutoff: usize,
}

struct SelftestPlan {
    criteria: Vec<u32>,
    settings: Settings,
}

enum Plan {
    Chiral(ChiralPlan),
    Wedge(WedgePlan),
    Subspace(SubspacePlan),
    Selftest(SelftestPlan),
}

/// Validates `map` and returns the plan with the parameters to record.
/// Subspace runs record the canonical file path and its digest.
fn plan(model: Model, mut map: ParamMap) -> CliResult<(Plan, ParamMap)> {
    let _: u64 = params::number(&map, "seed")?;
    let plan = match model {
        Model::Chiral => {
            let sweep: Vec<f64> = params::list(&map, "beta_sweep")?;
            if sweep.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
                return Err(CliError::usage(
                    "beta_sweep",
                    "inverse temperatures must be positive and finite",
                ));
            }
            Plan::Chiral(ChiralPlan {
                f: typed(
                    "test_function",
                    HalfLineTestFunction::parse(params::text(&map, "test_function")?),
                )?,
                beta: params::positive(&map, "beta")?,
                grid: alpha_grid(&map)?,
                sweep,
                ladder: params::range(&map, "ladder")?,
                tol: params::tolerance(&map, chiral::DEFAULT_TOLERANCE.abs)?,
            })
        }
        Model::Wedge => {
            let phi = typed("phi", SmoothFunction::parse(params::text(&map, "phi")?))?;
            let pi = typed("pi", SmoothFunction::parse(params::text(&map, "pi")?))?;
            Plan::Wedge(WedgePlan {
                data: typed("mass", WedgeCauchyData::new(phi, pi, params::positive(&map, "mass")?))?,
                grid: alpha_grid(&map)?,
                ladder: params::range(&map, "ladder")?,
                tol: params::tolerance(&map, wedge::DEFAULT_TOLERANCE.abs)?,
            })
        }
        Model::Subspace => {
            let given = PathBuf::from(params::text(&map, "file")?);
            let path = fs::canonicalize(&given).map_err(|e| CliError::io(&given, e))?;
            let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            let digest = sha256_hex(&bytes);
            let expected = params::text(&map, "file_sha256")?;
            if !expected.is_empty() && expected != digest {
                return Err(CliError::ReplayMismatch(format!(
                    "{} has digest {digest}, the manifest recorded {expected}",
                    path.display()
                )));
            }
            let text = String::from_utf8(bytes).map_err(|e| CliError::usage("file", e))?;
            let cutoff: usize = params::number(&map, "cutoff")?;
            if cutoff == 0 {
                return Err(CliError::usage("cutoff", "must be positive"));
            }
            let plan = Plan::Subspace(SubspacePlan {
                input: subspace_file::parse(&text)?,
                grid: alpha_grid(&map)?,
                cutoff,
            });
            map.insert("file".into(), path.display().to_string());
            map.insert("file_sha256".into(), digest);
            plan
        }
        Model::Selftest => {
            let criteria: Vec<u32> = params::list(&map, "criteria")?;
            if criteria.is_empty() {
                return Err(CliError::usage("criteria", "select at least one criterion"));
            }
            if let Some(c) = criteria.iter().find(|c| !acceptance::COMPUTED.contains(c)) {
                return Err(CliError::usage(
                    "criteria",
                    format!("criterion {c} is not one of 1 to 10; reproducibility is checked by replaying a manifest"),
                ));
            }
            Plan::Selftest(SelftestPlan {
                criteria,
                settings: Settings {
                    seed: params::number(&map, "seed")?,
                    rel_tol: params::tolerance(&map, 0.0)?.rel,
                },
            })
        }
    };
    Ok((plan, map))
}

/// Runs `model` with fully resolved parameters, writing CSV outputs and a
/// manifest into `out_dir`. Progress lines go to `log`.
pub fn execute(model: Model, map: ParamMap, out_dir: &Path, log: &mut dyn Write) -> CliResult<RunManifest> {
    let (plan, recorded) = plan(model, map)?;
    let mut out = OutputSet::create(out_dir)?;
    let result = match &plan {
        Plan::Chiral(p) => run_chiral(p, &mut out),
        Plan::Wedge(p) => run_wedge(p, &mut out),
        Plan::Subspace(p) => run_subspace(p, &mut out),
        Plan::Selftest(p) => run_selftest(p, &mut out, log),
    };
    let verdict = match &result {
        Ok(()) | Err(CliError::SelfTestFailed(_)) => Status::Complete,
        Err(e) => Status::Failed(e.to_string()),
    };
    let manifest = RunManifest {
        model,
        artifact_version: ARTIFACT_VERSION.to_string(),
        status: verdict,
        parameters: recorded,
        outputs: out.files().to_vec(),
    };
    manifest.write(out.dir())?;
    result.map(|()| manifest)
}

fn num(x: f64) -> Field {
    Field::Num(x)
}

fn run_chiral(p: &ChiralPlan, out: &mut OutputSet) -> CliResult<()> {
    let s1 = relative_entropy_chiral(&p.f, p.beta, p.tol)?;
    let mut rows = Vec::with_capacity(p.grid.len() + 1);
    for &a in &p.grid {
        let e = petz_renyi_chiral(&p.f, p.beta, a, p.tol)?;
        rows.push(vec![num(a), num(e.value), num(e.error_estimate)]);
    }
    rows.push(vec![num(1.0), num(s1.value), num(s1.error_estimate)]);
    out.write_csv("alpha_curve.csv", &["alpha", "entropy", "err_estimate"], &rows)?;

    let rows = p
        .sweep
        .iter()
        .map(|&b| {
            let s = relative_entropy_chiral(&p.f, b, p.tol)?;
            let d = beta_derivative_relative_entropy(&p.f, b, p.tol)?;
            Ok(vec![num(b), num(s.value), num(d.value)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    out.write_csv(
        "beta_sweep.csv",
        &["beta", "relative_entropy", "beta_derivative"],
        &rows,
    )?;

    let fc = alpha_derivative_at_one(&p.f, p.beta, p.tol)?;
    let lim = petz_renyi_chiral_alpha_limit(&p.f, p.beta, p.ladder.clone(), p.tol)?;
    let zero_t = zero_temperature_entropy(&p.f, p.tol)?;
    out.write_csv(
        "endpoints.csv",
        &["quantity", "value", "err_estimate"],
        &[
            vec!["relative_entropy".into(), num(s1.value), num(s1.error_estimate)],
            vec!["first_correction".into(), num(fc.value), num(fc.error_estimate)],
            vec!["alpha_limit".into(), num(lim.value), num(lim.spread)],
            vec!["zero_temperature".into(), num(zero_t.value), num(zero_t.error_estimate)],
        ],
    )
}

fn run_wedge(p: &WedgePlan, out: &mut OutputSet) -> CliResult<()> {
    let q = relative_entropy_wedge(&p.data, p.tol)?;
    let mut rows = Vec::with_capacity(p.grid.len() + 1);
    for &a in &p.grid {
        // S_0 vanishes for every coherent state; the quadrature domain is open at 0
        let e = if a == 0.0 {
            Estimate::exact(0.0)
        } else {
            petz_renyi_wedge(&p.data, a, p.tol)?
        };
        rows.push(vec![num(a), num(e.value), num(e.error_estimate)]);
    }
    rows.push(vec![num(1.0), num(q.value), num(q.error_estimate)]);
    out.write_csv("alpha_curve.csv", &["alpha", "entropy", "err_estimate"], &rows)?;

    let lim = petz_renyi_wedge_alpha_limit(&p.data, p.ladder.clone(), p.tol)?;
    out.write_csv(
        "endpoints.csv",
        &["quantity", "value", "err_estimate"],
        &[
            vec!["noether_charge".into(), num(q.value), num(q.error_estimate)],
            vec!["alpha_limit".into(), num(lim.value), num(lim.spread)],
        ],
    )
}

fn run_subspace(p: &SubspacePlan, out: &mut OutputSet) -> CliResult<()> {
    let modular = modular_operator(&p.input.subspace)?;
    let f = &p.input.vector;
    let measure = vector_spectral_measure(&modular, f)?;
    let oracle = FockOracle::new(&modular, p.cutoff)?;
    let rows = p
        .grid
        .iter()
        .map(|&a| {
            let exact = renyi_vector_entropy_from_measure(&measure, a)?;
            let fock = oracle.petz_renyi_bruteforce(f, a)?;
            Ok(vec![num(a), num(exact), num(fock), num((exact - fock).abs())])
        })
        .collect::<CliResult<Vec<_>>>()?;
    out.write_csv(
        "agreement.csv",
        &["alpha", "spectral_entropy", "fock_entropy", "abs_difference"],
        &rows,
    )?;
    out.write_bytes("vector_measure.csv", measure.to_csv().as_bytes())?;

    let s = vector_entropy_from_measure(&measure);
    out.write_csv(
        "endpoints.csv",
        &["quantity", "value"],
        &[
            vec!["relative_entropy".into(), num(s)],
            vec!["norm_sq".into(), num(measure.total_mass())],
        ],
    )?;

    let r = modular.residuals();
    let rows: Vec<Vec<Field>> = [
        ("j_delta_j", r.j_delta_j),
        ("delta_commutes_with_j", r.delta_commutes_with_j),
        ("j_antilinear", r.j_antilinear),
        ("j_involutive", r.j_involutive),
        ("flow_invariance", r.flow_invariance),
        ("spectral_pairing", r.spectral_pairing),
        ("tomita_action", r.tomita_action),
    ]
    .into_iter()
    .map(|(name, v)| vec![name.into(), num(v)])
    .collect();
    out.write_csv("residuals.csv", &["identity", "residual"], &rows)
}

fn run_selftest(p: &SelftestPlan, out: &mut OutputSet, log: &mut dyn Write) -> CliResult<()> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &id in &p.criteria {
        let start = Instant::now();
        let outcome = acceptance::run(id, &p.settings)?;
        // runtime goes to the log only, so that the CSV replays bit for bit
        let _ = writeln!(log, "{}  [{:.1} s]", outcome.summary(), start.elapsed().as_secs_f64());
        if !outcome.passed() {
            failed.push(id.to_string());
        }
        for c in &outcome.checks {
            rows.push(vec![
                Field::Text(id.to_string()),
                c.name.as_str().into(),
                num(c.value),
                num(c.threshold),
                c.passed().into(),
            ]);
        }
    }
    out.write_csv(
        "acceptance.csv",
        &["criterion", "check", "value", "threshold", "passed"],
        &rows,
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelfTestFailed(format!(
            "criteria {} did not pass",
            failed.join(", ")
        )))
    }
}
