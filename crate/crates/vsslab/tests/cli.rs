//! End-to-end checks of the binary: format contracts and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsslab"))
}

fn write_scenario(dir: &std::path::Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("scenario.txt");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn simulate_emits_contracted_csv() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "sim.duration = 2\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,omega,q,theta,z,u,s");
    // floor(duration/dt) + 1 data rows
    assert_eq!(lines.count(), 2001);
    assert!(out.join("metrics.txt").exists());
    assert!(out.join("scenario.resolved.txt").exists());
}

#[test]
fn resolved_scenario_reparses_identically() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "controller.kind = smmm-multi\nbank.n = 4\nsim.duration = 1\nseed = 9\n",
    );
    let out = dir.path().join("out");
    assert!(bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let resolved = std::fs::read_to_string(out.join("scenario.resolved.txt")).unwrap();
    let sc = vsslab::cli::parse_scenario(&resolved).unwrap();
    assert_eq!(vsslab::cli::dump_scenario(&sc), resolved);
}

#[test]
fn compare_emits_five_rows() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "sim.duration = 1\n");
    let out = dir.path().join("out");
    let output = bin()
        .args(["compare", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let table = std::fs::read_to_string(out.join("compare.txt")).unwrap();
    for kind in ["smc1", "smc2", "smmm1", "smmm2", "smmm-multi"] {
        assert!(table.contains(kind), "missing {kind} in table");
        assert!(out.join(kind).join("trace.csv").exists());
    }
    assert_eq!(table.lines().count(), 7); // header + 5 rows + reference note
}

#[test]
fn validation_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "reference.z = 9.0\n");
    let output = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&output.stderr);
    assert!(msg.contains("envelope"), "stderr: {msg}");
}

#[test]
fn unknown_key_exits_2_with_suggestion() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "controler = smc1\n");
    let output = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("controller"));
}

#[test]
fn divergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let scenario =
        write_scenario(dir.path(), "controller.kind = smmm1\nsmmm.k = 1000000\nsim.duration = 5\n");
    let output = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("diverged"));
}

#[test]
fn failing_stability_check_exits_4() {
    // the open-loop bank carries a depth integrator, so the free-regime
    // common-Lyapunov check must fail on the default scenario
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = bin().args(["stability", "--out"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(4));
    let report = std::fs::read_to_string(out.join("stability.txt")).unwrap();
    assert!(report.contains("check.0.pass = false"));
}

#[test]
fn absent_plot_signal_exits_2_listing_available() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "sim.duration = 1\n");
    let output = bin()
        .args(["simulate", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(["--plots", "validities"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("z, u, s"));
}

#[test]
fn sweep_axis_overrides_base_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "controller.kind = smc1\nsim.duration = 1\nsweep.controller.kind = smc1, smc2\n",
    );
    let out = dir.path().join("out");
    assert!(bin()
        .args(["sweep", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(table.contains("smc2,smc2,"));
}

#[test]
fn sweep_emits_metrics_table() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "sim.duration = 1\nsweep.controller.kind = smc1, smc2\nsweep.bank.delta = 0, 0.2\n",
    );
    let out = dir.path().join("out");
    assert!(bin()
        .args(["sweep", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let table = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 5); // header + 4 combos
    assert!(table.starts_with("controller,controller.kind,bank.delta,"));
}
