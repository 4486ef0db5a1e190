//! One test per acceptance criterion. Each prints a single PASS or FAIL line.

use std::fs;
use std::process::Command;
use std::time::Instant;

use renyi_cli::acceptance::{self, Settings};

fn criterion(id: u32) {
    let start = Instant::now();
    let outcome = acceptance::run(id, &Settings::default()).expect("criterion evaluates");
    println!("{}  [{:.1} s]", outcome.summary(), start.elapsed().as_secs_f64());
    for c in outcome.checks.iter().filter(|c| !c.passed()) {
        println!("    failed: {} = {:e} (threshold {:e})", c.name, c.value, c.threshold);
    }
    assert!(outcome.passed(), "criterion {id} failed");
}

#[test]
fn criterion_01_endpoint_zero() {
    criterion(1);
}

#[test]
fn criterion_02_monotonicity_and_bound() {
    criterion(2);
}

#[test]
fn criterion_03_chiral_alpha_limit() {
    criterion(3);
}

#[test]
fn criterion_04_chiral_first_correction() {
    criterion(4);
}

#[test]
fn criterion_05_beta_behaviour() {
    criterion(5);
}

#[test]
fn criterion_06_wedge_alpha_limit() {
    criterion(6);
}

#[test]
fn criterion_07_oracle_equivalence() {
    criterion(7);
}

#[test]
fn criterion_08_modular_identities() {
    criterion(8);
}

#[test]
fn criterion_09_model_kernels() {
    criterion(9);
}

#[test]
fn criterion_10_analyticity() {
    criterion(10);
}

/// Runs the self-test twice, the second time replaying the first manifest,
/// and compares every output byte for byte.
#[test]
fn criterion_11_reproducibility() {
    let start = Instant::now();
    let dir = tempfile::TempDir::new().unwrap();
    let (a, b) = (dir.path().join("first"), dir.path().join("replay"));
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_renyi")).args(args).output().unwrap();
    let first = run(&["selftest", "--criteria", "1,3,8,10", "--out-dir", a.to_str().unwrap()]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let manifest = a.join("manifest.txt");
    let replay = run(&[
        "selftest",
        "--config",
        manifest.to_str().unwrap(),
        "--out-dir",
        b.to_str().unwrap(),
    ]);
    let identical = replay.status.code() == Some(0)
        && ["acceptance.csv", "manifest.txt"]
            .iter()
            .all(|f| fs::read(a.join(f)).unwrap() == fs::read(b.join(f)).unwrap());
    println!(
        "criterion 11 {:<32} {}  (replayed outputs byte-identical)  [{:.1} s]",
        acceptance::title(11),
        if identical { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    assert!(identical, "replay differs: {}", String::from_utf8_lossy(&replay.stderr));
}
