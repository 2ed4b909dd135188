use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qentropy_cli::{parse_scenario, run_invariant_suite, SuiteConfig};

fn qentropy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qentropy")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn verify_passes_with_defaults() {
    let out = qentropy(&["verify"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{stdout}");
    assert!(stdout.contains("0 failed (seed 0)"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn verify_catches_corrupted_evolution() {
    let out = qentropy(&["verify", "--dims", "2,4", "--corrupt-evolution"]);
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL  entropy-invariance"), "{stdout}");
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let verdicts = |seed| {
        let config = SuiteConfig { seed, dims: vec![2, 4], ..SuiteConfig::default() };
        run_invariant_suite(&config).unwrap().verdicts()
    };
    let reference = verdicts(0);
    assert!(reference.iter().all(|v| v.2));
    for seed in 1..10 {
        assert_eq!(verdicts(seed), reference, "seed {seed}");
    }
}

#[test]
fn evolve_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.json");
    let out = qentropy(&[
        "evolve",
        fixture("composite_coupled.toml").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# qentropy-csv v1"));
    assert!(lines.next().unwrap().contains("system=composite"));
    assert_eq!(
        lines.next().unwrap(),
        "t,entropy,sigma_z_a,sigma_z_b,pop_0,pop_1,pop_2,pop_3,entropy_a"
    );
    assert_eq!(lines.count(), 401);

    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["format"], "qentropy-summary v1");
    assert_eq!(json["passed"], true);
}

#[test]
fn rabi_flip_fixture_transfers_population() {
    let out = qentropy(&["evolve", fixture("rabi_flip.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    // t, entropy, sigma_z, pop_0, pop_1, transition_0_1
    assert!((last[4] - 1.0).abs() < 1e-12);
    assert!((last[2] + 1.0).abs() < 1e-12);
}

#[test]
fn invalid_probabilities_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(fixture("spin_stationary.toml"))
        .unwrap()
        .replace("weights = [0.3, 0.7]", "weights = [0.5, 0.6]");
    std::fs::write(&path, text).unwrap();
    let out = qentropy(&["evolve", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum ≠ 1"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.toml");
    std::fs::write(&path, "[system\nkind = ").unwrap();
    assert_eq!(code(&qentropy(&["evolve", path.to_str().unwrap()])), 2);
    assert_eq!(code(&qentropy(&["evolve", "/nonexistent/scenario.toml"])), 2);
    assert_eq!(code(&qentropy(&["no-such-command"])), 2);
}

#[test]
fn rabi_command_matches_closed_form() {
    let out = qentropy(&["rabi", "--delta", "1", "--omega", "2", "--points", "200"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3 + 200);
    for line in text.lines().skip(3) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[2] - v[3]).abs() <= 1e-9);
    }
}

#[test]
fn perturb_command_reports_both_probabilities() {
    let out = qentropy(&["perturb", fixture("perturb_explicit.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("t,exact_0_1,first_order_0_1")));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] / last[2] - 1.0).abs() < 0.05);
}

#[test]
fn basis_check_reports_small_residuals() {
    let out = qentropy(&["basis-check", "--lattice-n", "64"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lattice-momentum,64,"));
}

#[test]
fn fixtures_round_trip() {
    for name in ["spin_stationary.toml", "rabi_flip.toml", "lattice_momentum.toml", "composite_coupled.toml"] {
        let spec = parse_scenario(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let again = parse_scenario(&spec.to_toml()).unwrap();
        assert_eq!(again.document, spec.document, "{name}");
        assert_eq!(again.times, spec.times);
    }
}
