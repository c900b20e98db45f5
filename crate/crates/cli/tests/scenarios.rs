use quasimoment_cli::scenario::{Check, ScenarioRef};
use quasimoment_cli::{bundled_ids, bundled_scenario, parse_config, run_config, CliError};
use quasimoment_core::ExecMode;

fn run(src: &str) -> quasimoment_cli::runner::Report {
    run_config(&parse_config(src).unwrap(), None, ExecMode::Parallel).unwrap().0
}

#[test]
fn every_bundled_scenario_parses_and_round_trips() {
    for id in bundled_ids() {
        let sc = bundled_scenario(id).unwrap();
        assert_eq!(sc.id, id);
        let again: quasimoment_cli::scenario::Scenario =
            serde_json::from_str(&serde_json::to_string(&sc).unwrap()).unwrap();
        assert_eq!(again.checks.len(), sc.checks.len());
    }
}

#[test]
fn single_scenario_file_is_accepted() {
    let cfg = parse_config(quasimoment_cli::bundled_source("paper-sl2-vector").unwrap()).unwrap();
    assert!(matches!(&cfg.scenarios[..], [ScenarioRef::Inline(_)]));
}

#[test]
fn wrong_schema_is_a_parse_error() {
    let e = parse_config(r#"{"schema": "quasimoment.scenarios/99", "scenarios": []}"#).unwrap_err();
    assert!(matches!(e, CliError::Parse(_)));
}

#[test]
fn named_bivectors_combine_linearly() {
    let report = run(
        r#"{"scenarios": [{"id": "combo",
            "setting": {"kind": "module", "algebra": "sl(2)", "module": "adjoint", "parity": "odd"},
            "checks": [
              {"check": "quasi-poisson", "bivector": "B - r", "expected": "0"},
              {"check": "quasi-poisson", "bivector": "2*B - 2*r", "expected": "0"},
              {"check": "quasi-poisson", "bivector": "2*∂xi2*∂xim2 + 2*∂xi0^2"}
            ]}]}"#,
    );
    assert!(report.passed, "{:#?}", report);
}

#[test]
fn literal_and_named_bivector_agree() {
    let report = run(
        r#"{"scenarios": [{"id": "x",
            "setting": {"kind": "module", "algebra": "sl(2)", "module": "adjoint", "parity": "odd"},
            "checks": [{"check": "change-of-variables", "from": "B", "to": "2*∂xi2*∂xim2 + 2*∂xi0^2", "images": {}}]}]}"#,
    );
    assert!(report.passed);
}

#[test]
fn contraction_factor_is_configurable() {
    let mut sc = bundled_scenario("paper-forms-sl2").unwrap();
    let run_with = |sc: &quasimoment_cli::scenario::Scenario| {
        let src = serde_json::json!({ "scenarios": [sc] }).to_string();
        run(&src)
    };
    assert!(!run_with(&sc).passed);
    if let Check::FormsIdentities { contraction_factor, .. } = &mut sc.checks[0] {
        *contraction_factor = Some("-4".into());
    }
    let report = run_with(&sc);
    assert!(report.passed, "{}", quasimoment_cli::render(&report, true));
}

#[test]
fn quartic_correction_reports_components() {
    let report = run(r#"{"scenarios": ["paper-thm-fusion-sl3"]}"#);
    let gm = report.scenarios[0]
        .checks
        .iter()
        .find(|c| c.check == "group-moment")
        .unwrap();
    assert!(gm.passed);
    let details = &gm.results[0].details;
    assert!(details.iter().any(|d| d.starts_with("nu[H1] = ")));
    assert!(details.iter().any(|d| d.contains("0 free parameters")));
}

#[test]
fn invariants_table_without_setting() {
    let report = run(
        r#"{"scenarios": [{"id": "t", "checks": [{"check": "invariants-table",
            "rows": [{"algebra": "sl(2)", "module": "v1"}, {"algebra": "sl(2)", "module": "sym2(v1)", "expected": 0}]}]}]}"#,
    );
    assert!(report.passed);
    let report = run(
        r#"{"scenarios": [{"id": "t", "checks": [{"check": "invariants-table",
            "rows": [{"algebra": "sl(2)", "module": "v1", "expected": 1}]}]}]}"#,
    );
    assert!(!report.passed);
}
