use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasimoment"))
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit status")
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> PathBuf {
    let p = dir.path().join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn empty_scenario_list_exits_zero() {
    let o = bin().arg("run").arg(manifest("configs/empty.json")).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn passing_bundled_scenarios_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"schema": "quasimoment.scenarios/1", "scenarios": ["paper-sl2-adjoint", "paper-thm-fusion-sl3"]}"#,
    );
    let out = dir.path().join("report.json");
    let o = bin().arg("run").arg(&cfg).arg("--json").arg(&out).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], "quasimoment.report/1");
    assert_eq!(report["passed"], true);
    assert_eq!(report["scenarios"].as_array().unwrap().len(), 2);
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"scenarios": [{"id": "wrong-degree",
            "setting": {"kind": "module", "algebra": "sl(2)", "module": "v1", "parity": "even"},
            "checks": [{"check": "exp-degree", "expected": 5}]}]}"#,
    );
    let o = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL [wrong-degree]"));
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"scenarios": ["#);
    assert_eq!(code(&bin().arg("run").arg(&cfg).output().unwrap()), 2);
}

#[test]
fn unknown_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"scenarios": [{"id": "x", "checks": [{"check": "no-such-check"}]}]}"#,
    );
    assert_eq!(code(&bin().arg("run").arg(&cfg).output().unwrap()), 2);
}

#[test]
fn bad_expression_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"scenarios": [{"id": "x",
            "setting": {"kind": "module", "algebra": "sl(2)", "module": "adjoint", "parity": "odd"},
            "checks": [{"check": "hamiltonian", "bivector": "B + nonsense"}]}]}"#,
    );
    assert_eq!(code(&bin().arg("run").arg(&cfg).output().unwrap()), 2);
}

#[test]
fn unsupported_setting_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"scenarios": [{"id": "x", "setting": {"kind": "fusion", "n": 9, "parity": "odd"},
            "checks": [{"check": "rdyn-zero"}]}]}"#,
    );
    assert_eq!(code(&bin().arg("run").arg(&cfg).output().unwrap()), 3);
}

#[test]
fn fusion_check_on_module_setting_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"scenarios": [{"id": "x",
            "setting": {"kind": "module", "algebra": "sl(2)", "module": "adjoint", "parity": "odd"},
            "checks": [{"check": "fusion-identities"}]}]}"#,
    );
    assert_eq!(code(&bin().arg("run").arg(&cfg).output().unwrap()), 3);
}

#[test]
fn report_is_deterministic_across_modes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest("configs/bundled.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    bin().arg("run").arg(&cfg).arg("--json").arg(&a).output().unwrap();
    bin().arg("run").arg(&cfg).arg("--json").arg(&b).arg("--sequential").output().unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn truncation_flag_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"scenarios": ["paper-sl2-vector"]}"#);
    let out = dir.path().join("r.json");
    let o = bin()
        .args(["run", cfg.to_str().unwrap(), "--truncation", "5", "--json", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["scenarios"][0]["truncation"], 5);
}

#[test]
fn invariants_command() {
    let o = bin().args(["invariants", "sl(2)", "sym2(v1)", "adjoint"]).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).trim_end().ends_with("= 1"));
    let o = bin().args(["invariants", "sl(3)", "v1", "v1dual"]).output().unwrap();
    assert!(String::from_utf8_lossy(&o.stdout).trim_end().ends_with("= 0"));
    let o = bin().args(["invariants", "nope(2)", "v1", "v1"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn show_prints_bundled_json() {
    for id in ["paper-sl2-adjoint", "paper-thm-fusion-sl3"] {
        let o = bin().args(["show", id]).output().unwrap();
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["id"], id);
    }
    assert_eq!(code(&bin().args(["show", "missing"]).output().unwrap()), 2);
}
