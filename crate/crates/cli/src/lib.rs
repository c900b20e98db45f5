//! Scenario runner for `quasimoment-core`.
//!
//! Scenarios are JSON descriptions of a setting and a list of checks. Running
//! them yields a deterministic, versioned [`runner::Report`]; wall-clock data
//! lives in a separate [`runner::Timing`].

pub mod runner;
pub mod scenario;

use std::fmt::Write as _;
use std::path::Path;

use quasimoment_core::moment::DEFAULT_TRUNCATION;
use quasimoment_core::ExecMode;

use runner::{run_all, Report, Timing};
use scenario::{Config, Scenario, ScenarioRef, SCENARIO_SCHEMA};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const CONSTRUCTION: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction error: {0}")]
    Construction(String),
}

impl From<quasimoment_core::Error> for CliError {
    fn from(e: quasimoment_core::Error) -> CliError {
        use quasimoment_core::Error as E;
        match e {
            E::Parse(m) => CliError::Parse(m),
            E::UnknownGenerator(_) => CliError::Parse(e.to_string()),
            E::Construction(m) => CliError::Construction(m),
            _ => CliError::Construction(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Construction(_) => exit::CONSTRUCTION,
        }
    }
}

macro_rules! bundled {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../scenarios/", $id, ".json")))),*]
    };
}

/// Scenarios shipped with the binary, as `(id, json)`.
pub const BUNDLED: &[(&str, &str)] = bundled!(
    "paper-sl2-adjoint",
    "paper-sl2-vector",
    "paper-fusion-sl2",
    "paper-forms-sl2",
    "paper-thm-fusion-sl3",
    "fusion-sl2-even",
    "list-invariants",
    "list-sl4-wedge2",
    "list-so8-spinors",
    "list-sp6",
);

pub fn bundled_ids() -> Vec<&'static str> {
    BUNDLED.iter().map(|(id, _)| *id).collect()
}

pub fn bundled_source(id: &str) -> Result<&'static str, CliError> {
    BUNDLED
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, src)| *src)
        .ok_or_else(|| {
            CliError::Parse(format!(
                "no bundled scenario '{id}' (available: {})",
                bundled_ids().join(", ")
            ))
        })
}

pub fn bundled_scenario(id: &str) -> Result<Scenario, CliError> {
    serde_json::from_str(bundled_source(id)?).map_err(|e| CliError::Parse(format!("bundled scenario '{id}': {e}")))
}

/// Parses a config. A bare scenario object is wrapped into a one-entry config.
pub fn parse_config(src: &str) -> Result<Config, CliError> {
    let value: serde_json::Value = serde_json::from_str(src).map_err(|e| CliError::Parse(e.to_string()))?;
    let config = if value.get("checks").is_some() {
        let sc: Scenario = serde_json::from_value(value).map_err(|e| CliError::Parse(e.to_string()))?;
        Config {
            schema: None,
            truncation: None,
            scenarios: vec![ScenarioRef::Inline(Box::new(sc))],
        }
    } else {
        serde_json::from_value(value).map_err(|e| CliError::Parse(e.to_string()))?
    };
    if let Some(schema) = &config.schema {
        if schema != SCENARIO_SCHEMA {
            return Err(CliError::Parse(format!(
                "unsupported schema '{schema}', expected '{SCENARIO_SCHEMA}'"
            )));
        }
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_config(&src)
}

/// Resolves bundled references and the truncation order of every scenario.
/// A command-line order wins over the scenario's, which wins over the config's.
pub fn resolve(config: &Config, truncation: Option<u32>) -> Result<Vec<(Scenario, u32)>, CliError> {
    config
        .scenarios
        .iter()
        .map(|r| {
            let sc = match r {
                ScenarioRef::Bundled(id) => bundled_scenario(id)?,
                ScenarioRef::Inline(sc) => (**sc).clone(),
            };
            let n = truncation
                .or(sc.truncation)
                .or(config.truncation)
                .unwrap_or(DEFAULT_TRUNCATION);
            if n == 0 {
                return Err(CliError::Parse(format!("scenario '{}': truncation must be positive", sc.id)));
            }
            Ok((sc, n))
        })
        .collect()
}

pub fn run_config(config: &Config, truncation: Option<u32>, mode: ExecMode) -> Result<(Report, Timing), CliError> {
    run_all(&resolve(config, truncation)?, mode)
}

pub fn exit_code(report: &Report) -> i32 {
    if report.passed {
        exit::OK
    } else {
        exit::CHECK_FAILED
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Plain-text summary of a report.
pub fn render(report: &Report, verbose: bool) -> String {
    let mut out = String::new();
    for sc in &report.scenarios {
        let setting = sc.setting.as_deref().unwrap_or("no setting");
        let _ = writeln!(out, "{} [{}] {}", verdict(sc.passed), sc.id, setting);
        for c in &sc.checks {
            let _ = writeln!(out, "  {} {}", verdict(c.passed), c.check);
            for r in &c.results {
                if r.passed && !verbose {
                    continue;
                }
                let _ = writeln!(out, "    {} {}: {}", verdict(r.passed), r.identity, r.residual);
                if verbose || !r.passed {
                    for d in &r.details {
                        let _ = writeln!(out, "      {d}");
                    }
                }
            }
        }
    }
    let passed = report.scenarios.iter().filter(|s| s.passed).count();
    let _ = writeln!(out, "{passed}/{} scenarios pass", report.scenarios.len());
    out
}

pub fn render_timing(timing: &Timing) -> String {
    let mut out = String::new();
    for t in &timing.scenarios {
        let total: f64 = t.setup_ms + t.checks_ms.iter().sum::<f64>();
        let _ = writeln!(out, "{}: {total:.1} ms (setup {:.1} ms)", t.id, t.setup_ms);
    }
    out
}
