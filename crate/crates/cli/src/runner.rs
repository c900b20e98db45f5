use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use quasimoment_core::factorize::gauss_factorize;
use quasimoment_core::forms::{check_contraction, FormSpace};
use quasimoment_core::invariants::key_condition;
use quasimoment_core::liealg::{LieAlgebra, ModuleExpr, RMatrixData};
use quasimoment_core::moment::*;
use quasimoment_core::supermatrix::SuperMatrix;
use quasimoment_core::{par_map, ExecMode, SuperPoly, Q};

use crate::scenario::{Check, Correction, InvariantRow, Scenario, SettingSpec};
use crate::CliError;

pub const REPORT_SCHEMA: &str = "quasimoment.report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub passed: bool,
    pub scenarios: Vec<ScenarioReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub setting: Option<String>,
    pub truncation: Option<u32>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    pub results: Vec<CheckReport>,
}

/// Wall-clock timings, reported apart from the deterministic report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub scenarios: Vec<ScenarioTiming>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioTiming {
    pub id: String,
    pub setup_ms: f64,
    pub checks_ms: Vec<f64>,
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn core(e: quasimoment_core::Error) -> CliError {
    e.into()
}

fn manual(identity: &str, passed: bool, residual: impl Into<String>, truncation: Option<u32>) -> CheckReport {
    CheckReport {
        identity: identity.to_string(),
        passed,
        residual: residual.into(),
        truncation,
        details: Vec::new(),
    }
}

fn parse_q(src: &str) -> Result<Q, CliError> {
    Q::from_str(src.trim()).map_err(|_| CliError::Parse(format!("'{src}' is not a rational number")))
}

struct Context {
    s: MomentSetting,
    fusion: Option<FusionData>,
    r: RMatrixData,
    mu: MomentMap,
    pi_b: SuperPoly,
}

impl Context {
    fn build(spec: &SettingSpec, truncation: u32) -> Result<Context, CliError> {
        let (s, fusion) = match spec {
            SettingSpec::Module { .. } => (MomentSetting::parse(&spec.label(), truncation).map_err(core)?, None),
            SettingSpec::Fusion { n, parity } => {
                let f = fusion_bivector(*n, parity.parity(), truncation).map_err(core)?;
                (f.setting.clone(), Some(f))
            }
        };
        let r = match &fusion {
            Some(f) => f.rmatrix.clone(),
            None => s.g.standard_r_matrix(),
        };
        let mu = moment_map(&s).map_err(core)?;
        let pi_b = match &fusion {
            Some(f) => f.pi_b.clone(),
            None => bilinear_bivector(&s).map_err(core)?,
        };
        Ok(Context { s, fusion, r, mu, pi_b })
    }

    fn order(&self) -> Option<u32> {
        self.s.compare_order()
    }

    fn fusion(&self, check: &str) -> Result<&FusionData, CliError> {
        self.fusion
            .as_ref()
            .ok_or_else(|| CliError::Construction(format!("{check} needs a fusion setting")))
    }

    fn named(&self, name: &str) -> Result<Option<SuperPoly>, CliError> {
        Ok(Some(match name {
            "B" => self.pi_b.clone(),
            "r" => rmatrix_bivector(&self.s, &self.r),
            "twist" => twist_bivector(&self.s, &self.r),
            "rdyn" => dynamical_correction(&self.s, &self.mu).map_err(core)?,
            "W" => self.fusion("W")?.pi_w.clone(),
            "twistW" => self.fusion("twistW")?.lambda_w.clone(),
            _ => return Ok(None),
        }))
    }

    /// Resolves a signed sum of named pieces, falling back to a literal
    /// multivector expression.
    fn multivector(&self, src: &str) -> Result<SuperPoly, CliError> {
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in compact.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut total = self.s.space.zero();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let (coef, name) = match body.rsplit_once('*') {
                Some((c, n)) => match Q::from_str(c) {
                    Ok(q) => (q, n),
                    Err(_) => return self.literal(src),
                },
                None => (Q::from_integer(1.into()), body),
            };
            let Some(piece) = self.named(name)? else {
                return self.literal(src);
            };
            let coef = if neg { -coef } else { coef };
            total.add_assign(&piece.scale(&coef));
        }
        Ok(total)
    }

    fn literal(&self, src: &str) -> Result<SuperPoly, CliError> {
        self.s.space.parse(src).map_err(|e| CliError::Parse(format!("'{src}': {e}")))
    }

    fn phi(&self) -> Result<SuperMatrix, CliError> {
        Ok(exp_moment(&self.s, &self.mu).map_err(core)?.0)
    }
}

fn run_check(cx: &Context, check: &Check) -> Result<Vec<CheckReport>, CliError> {
    let s = &cx.s;
    Ok(match check {
        Check::Hamiltonian { bivector } => {
            vec![check_hamiltonian(s, &cx.multivector(bivector)?, &cx.mu)]
        }
        Check::QuasiPoisson { bivector, expected } => {
            let pi = cx.multivector(bivector)?;
            let expected = match expected {
                Some(e) => cx.multivector(e)?,
                None => s.phi_v(),
            };
            vec![check_quasi_poisson(s, &pi, &expected)]
        }
        Check::RdynZero => {
            let r = dynamical_correction(s, &cx.mu).map_err(core)?;
            vec![CheckReport::new("r_dyn = 0", &[r], cx.order())]
        }
        Check::ExpDegree { expected } => {
            let (_, deg) = exp_moment(s, &cx.mu).map_err(core)?;
            vec![manual(
                "degree of the terminating exponential series of mu",
                deg == *expected,
                format!("degree {deg}, expected {expected}"),
                None,
            )]
        }
        Check::GroupMoment { bivector, correction } => {
            let pi = cx.multivector(bivector)?;
            match correction {
                Correction::None => vec![check_group_moment(s, &pi, &cx.phi()?).map_err(core)?],
                Correction::Quartic => match solve_quartic_correction(s, &pi, &cx.mu).map_err(core)? {
                    None => vec![manual("quartic correction exists", false, "no solution", None)],
                    Some(sol) => {
                        let mut rep = check_group_moment(s, &pi, &sol.phi)
                            .map_err(core)?
                            .with_detail(format!(
                                "{} unknowns, {} free parameters",
                                sol.unknowns, sol.free_parameters
                            ));
                        for (label, c) in s.g.labels.iter().zip(&sol.components) {
                            rep = rep.with_detail(format!("nu[{label}] = {c}"));
                        }
                        let mu_comp = MomentMap::components_of(s, &cx.mu.g_valued(s));
                        let quad: Vec<SuperPoly> = sol
                            .components
                            .iter()
                            .zip(&mu_comp)
                            .map(|(n, m)| n.degree_part(2).sub(m))
                            .collect();
                        vec![
                            rep,
                            manual(
                                "correction is unique",
                                sol.free_parameters == 0,
                                format!("{} free", sol.free_parameters),
                                None,
                            ),
                            CheckReport::new("quadratic part of nu = mu", &quad, None),
                        ]
                    }
                },
            }
        }
        Check::LuMoment { bivector, kappa } => {
            let pi = cx.multivector(bivector)?;
            let kappa = parse_q(kappa)?;
            let l = gauss_factorize(&cx.phi()?, s.truncation).map_err(core)?;
            vec![check_lu_moment(s, &pi, &l, &kappa).map_err(core)?]
        }
        Check::FusionIdentities => {
            let f = cx.fusion("fusion-identities")?;
            let sp = &s.space;
            let o = cx.order();
            let derived = f.derived_constant();
            let c_rep = manual(
                "c equals the constant forced by [[pi_W, pi_W]] = 0",
                derived.as_ref() == Some(&f.c),
                format!(
                    "c = {}, derived {}",
                    f.c,
                    derived.map(|d| d.to_string()).unwrap_or_else(|| "none".into())
                ),
                None,
            );
            vec![
                CheckReport::new("[[pi_W, pi_W]] = 0", &[sp.schouten(&f.pi_w, &f.pi_w)], o),
                CheckReport::new("[[pi_B, pi_W]] = 0", &[sp.schouten(&f.pi_b, &f.pi_w)], o),
                CheckReport::new("L_x pi_W = -delta(x)_W", &f.lie_derivative_residuals(), o),
                CheckReport::new("both expressions of pi_W agree", &[f.pi_w.sub(&f.pi_w_second)], o),
                CheckReport::new("psi_gl = psi + z(x)z/(2n)", &[f.psi_gl_residual()], o),
                c_rep,
            ]
        }
        Check::ChangeOfVariables { from, to, images } => {
            let table = s.space.table();
            let mut full = vec![None; table.len()];
            for (name, expr) in images {
                let i = table
                    .index_of(name)
                    .map_err(|_| CliError::Parse(format!("unknown coordinate '{name}'")))?;
                full[i] = Some(cx.literal(expr)?);
            }
            let from = cx.multivector(from)?;
            let to = cx.multivector(to)?;
            vec![check_change_of_variables(s, &from, &to, &full).map_err(core)?]
        }
        Check::FormsIdentities {
            omega,
            omega_b,
            alpha,
            contraction_factor,
        } => {
            let fs = FormSpace::for_space(&s.space).map_err(core)?;
            let parse = |src: &str| fs.parse(src).map_err(|e| CliError::Parse(format!("'{src}': {e}")));
            let o = cx.order();
            let omega = parse(omega)?;
            let mut out = Vec::new();
            let basic = |name: &str, w: &SuperPoly, out: &mut Vec<CheckReport>| {
                out.push(CheckReport::new(&format!("d {name} = 0"), &[fs.d(w)], o));
                out.push(manual(&format!("{name} is nondegenerate"), fs.is_nondegenerate(w), "", None));
            };
            basic("omega", &omega, &mut out);
            let omega_b = omega_b.as_deref().map(parse).transpose()?;
            if let Some(wb) = &omega_b {
                basic("omega_B", wb, &mut out);
                let mut same = Vec::new();
                for x in &s.fields {
                    let comps = fs.vector_components(&s.space, x).map_err(core)?;
                    same.push(fs.interior(&comps, &omega).sub(&fs.interior(&comps, wb)));
                }
                out.push(CheckReport::new("iota_x omega = iota_x omega_B", &same, o));
                if let Some(a) = alpha {
                    let a = parse(a)?;
                    out.push(CheckReport::new(
                        "omega - omega_B = d alpha",
                        &[omega.sub(wb).sub(&fs.d(&a))],
                        o,
                    ));
                }
            }
            if let Some(k) = contraction_factor {
                let k = parse_q(k)?;
                let target = omega_b.as_ref().unwrap_or(&omega);
                out.push(check_contraction(s, &fs, target, &cx.mu, &k).map_err(core)?);
            }
            let mc = fs.structure_residual(&cx.phi()?, s.truncation).map_err(core)?;
            let mc: Vec<SuperPoly> = mc.entries.into_iter().flatten().collect();
            out.push(CheckReport::new("Maurer-Cartan structure equation for exp(mu)", &mc, o));
            out
        }
        Check::InvariantsTable { rows } => invariants_table(rows)?,
    })
}

/// Runs one scenario. `truncation` is the order already resolved from the
/// command line, config and scenario.
pub fn run_scenario(sc: &Scenario, truncation: u32) -> Result<(ScenarioReport, ScenarioTiming), CliError> {
    let t0 = Instant::now();
    let cx = match &sc.setting {
        Some(spec) => Some(Context::build(spec, truncation)?),
        None => None,
    };
    let setup_ms = ms(t0);
    let mut checks = Vec::new();
    let mut checks_ms = Vec::new();
    for check in &sc.checks {
        let t = Instant::now();
        let results = match (&cx, check) {
            (Some(cx), _) => run_check(cx, check)?,
            (None, Check::InvariantsTable { rows }) => invariants_table(rows)?,
            (None, _) => {
                return Err(CliError::Construction(format!(
                    "scenario '{}': check {} needs a setting",
                    sc.id,
                    check.name()
                )))
            }
        };
        checks_ms.push(ms(t));
        checks.push(CheckOutcome {
            check: check.name().to_string(),
            passed: results.iter().all(|r| r.passed),
            results,
        });
    }
    let report = ScenarioReport {
        id: sc.id.clone(),
        setting: sc.setting.as_ref().map(SettingSpec::label),
        truncation: cx.as_ref().and_then(|c| c.s.truncation),
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    Ok((report, ScenarioTiming { id: sc.id.clone(), setup_ms, checks_ms }))
}

fn invariants_table(rows: &[InvariantRow]) -> Result<Vec<CheckReport>, CliError> {
    let mut out = Vec::new();
    for row in rows {
        let g = LieAlgebra::parse(&row.algebra).map_err(core)?;
        let v = ModuleExpr::parse(&row.module).map_err(core)?;
        let k = key_condition(&g, &v).map_err(core)?;
        out.push(manual(
            &format!("dim Hom(wedge3 V, S3 V) for {} on {}", row.algebra, row.module),
            k.hom_wedge3_sym3 == row.expected,
            format!("{} (expected {})", k.hom_wedge3_sym3, row.expected),
            None,
        ));
    }
    Ok(out)
}

/// Runs all scenarios, in parallel when `mode` allows it. The first error in
/// scenario order is returned.
pub fn run_all(scenarios: &[(Scenario, u32)], mode: ExecMode) -> Result<(Report, Timing), CliError> {
    let results = par_map(mode, scenarios, |(sc, n)| run_scenario(sc, *n));
    let mut reports = Vec::new();
    let mut timing = Timing::default();
    for r in results {
        let (rep, t) = r?;
        reports.push(rep);
        timing.scenarios.push(t);
    }
    Ok((
        Report {
            schema: REPORT_SCHEMA,
            passed: reports.iter().all(|r| r.passed),
            scenarios: reports,
        },
        timing,
    ))
}
