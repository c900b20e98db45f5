//! JSON schema of scenario files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use quasimoment_core::Parity;

pub const SCENARIO_SCHEMA: &str = "quasimoment.scenarios/1";

/// Top-level input of `quasimoment run`.
///
/// A config lists scenarios inline or by the id of a bundled scenario. A file
/// holding a single scenario object is accepted as well.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub schema: Option<String>,
    #[serde(default)]
    pub truncation: Option<u32>,
    #[serde(default)]
    pub scenarios: Vec<ScenarioRef>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Bundled(String),
    Inline(Box<Scenario>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<SettingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParitySpec {
    Even,
    Odd,
}

impl ParitySpec {
    pub fn parity(self) -> Parity {
        match self {
            ParitySpec::Even => Parity::Even,
            ParitySpec::Odd => Parity::Odd,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParitySpec::Even => "even",
            ParitySpec::Odd => "odd",
        }
    }
}

/// The supermanifold a scenario lives on.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SettingSpec {
    /// A module `V` of a simple Lie algebra, e.g. `sl(2)` acting on `adjoint`.
    Module {
        algebra: String,
        module: String,
        parity: ParitySpec,
    },
    /// `sl(n)` acting on `V ⊕ V*` with the fusion bivector available.
    Fusion { n: usize, parity: ParitySpec },
}

impl SettingSpec {
    pub fn label(&self) -> String {
        match self {
            SettingSpec::Module { algebra, module, parity } => {
                format!("{algebra}:{module}:{}", parity.as_str())
            }
            SettingSpec::Fusion { n, parity } => format!("sl({n}):v1+v1dual:{}", parity.as_str()),
        }
    }
}

fn bilinear() -> String {
    "B".to_string()
}

/// One identity to verify.
///
/// Bivector fields such as `bivector` are either a signed sum of named
/// pieces or a literal polynomial in the coordinates and their `∂` symbols.
/// Named pieces: `B` (from the invariant form), `r` (image of the
/// r-matrix), `twist` (image of half the Casimir split), `rdyn` (dynamical
/// correction), and on fusion settings `W` and `twistW`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Check {
    Hamiltonian {
        #[serde(default = "bilinear")]
        bivector: String,
    },
    QuasiPoisson {
        #[serde(default = "bilinear")]
        bivector: String,
        /// Expected value of `[[π, π]]`; the Cartan trivector image when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<String>,
    },
    RdynZero,
    ExpDegree {
        expected: usize,
    },
    GroupMoment {
        #[serde(default = "bilinear")]
        bivector: String,
        #[serde(default)]
        correction: Correction,
    },
    LuMoment {
        bivector: String,
        kappa: String,
    },
    FusionIdentities,
    ChangeOfVariables {
        from: String,
        to: String,
        images: BTreeMap<String, String>,
    },
    FormsIdentities {
        omega: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_b: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<String>,
        /// Checks `ι_x ω_B = factor · d⟨μ, x⟩` (on `omega` if `omega_b` is absent).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        contraction_factor: Option<String>,
    },
    InvariantsTable {
        rows: Vec<InvariantRow>,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Hamiltonian { .. } => "hamiltonian",
            Check::QuasiPoisson { .. } => "quasi-poisson",
            Check::RdynZero => "rdyn-zero",
            Check::ExpDegree { .. } => "exp-degree",
            Check::GroupMoment { .. } => "group-moment",
            Check::LuMoment { .. } => "lu-moment",
            Check::FusionIdentities => "fusion-identities",
            Check::ChangeOfVariables { .. } => "change-of-variables",
            Check::FormsIdentities { .. } => "forms-identities",
            Check::InvariantsTable { .. } => "invariants-table",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correction {
    #[default]
    None,
    /// Replace `μ` by the solved quartic correction `ν` before exponentiating.
    Quartic,
}

/// `dim Hom_g(⋀³V, S³V)` for one pair, compared with `expected`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantRow {
    pub algebra: String,
    pub module: String,
    #[serde(default)]
    pub expected: usize,
}
