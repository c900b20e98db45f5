//! Poisson and quasi-Poisson structures on a module and their moment maps.
//!
//! A [`MomentSetting`] bundles a Lie algebra, a module with an invariant form
//! `B`, the multivector space on its coordinates and the generating vector
//! fields. Matrices such as `Φ = exp(μ)` are taken in the defining
//! representation of the algebra, where the trace form equals `B_g`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::GStarElement;
use crate::liealg::{LieAlgebra, ModuleExpr, ModuleRep, RMatrixData};
use crate::linalg::{solve_affine, RatMatrix, SparseRow};
use crate::multivector::MvSpace;
use crate::supermatrix::{is_zero_to_order, SuperMatrix, SERIES_LIMIT};
use crate::superalgebra::{q, qi, Parity, SuperPoly, Q};

pub const DEFAULT_TRUNCATION: u32 = 8;

/// Outcome of an identity check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub identity: String,
    pub passed: bool,
    pub residual: String,
    pub truncation: Option<u32>,
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn new(identity: &str, residuals: &[SuperPoly], truncation: Option<u32>) -> CheckReport {
        let nonzero: Vec<String> = residuals
            .iter()
            .filter(|r| !is_zero_to_order(r, truncation))
            .map(|r| match truncation {
                Some(n) => r.truncate(n).to_string(),
                None => r.to_string(),
            })
            .collect();
        let mut residual = if nonzero.is_empty() { "0".to_string() } else { nonzero.join("; ") };
        if residual.chars().count() > 400 {
            residual = residual.chars().take(400).collect::<String>() + " ...";
        }
        CheckReport {
            identity: identity.to_string(),
            passed: nonzero.is_empty(),
            residual,
            truncation,
            details: Vec::new(),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> CheckReport {
        self.details.push(d.into());
        self
    }
}

/// Algebra, module and derived data shared by all constructions.
#[derive(Debug, Clone)]
pub struct MomentSetting {
    pub g: Arc<LieAlgebra>,
    pub rep: ModuleRep,
    pub space: MvSpace,
    /// Generating vector field of every basis element.
    pub fields: Vec<SuperPoly>,
    /// Truncation order used for even modules.
    pub truncation: Option<u32>,
}

impl MomentSetting {
    pub fn new(rep: ModuleRep, truncation: u32) -> Result<MomentSetting> {
        let space = rep.mv_space()?;
        let fields = (0..rep.algebra.dim())
            .map(|a| rep.generating_vector_field(&space, a))
            .collect();
        let truncation = if rep.parity == Parity::Even { Some(truncation) } else { None };
        Ok(MomentSetting {
            g: rep.algebra.clone(),
            rep,
            space,
            fields,
            truncation,
        })
    }

    pub fn parse(spec: &str, truncation: u32) -> Result<MomentSetting> {
        MomentSetting::new(ModuleRep::parse(spec)?, truncation)
    }

    pub fn k(&self) -> usize {
        self.space.dim()
    }

    /// Degree up to which residuals are compared: `N − 1` for even modules.
    pub fn compare_order(&self) -> Option<u32> {
        self.truncation.map(|n| n.saturating_sub(1))
    }

    pub fn form(&self) -> Result<&RatMatrix> {
        self.rep
            .form
            .as_ref()
            .ok_or_else(|| Error::Construction(format!("module {} has no invariant form", self.rep.expr)))
    }

    /// `x.z_c = Σ_i X[i][c] z_i` as a polynomial.
    pub fn act_on_coord(&self, x: &RatMatrix, c: usize) -> SuperPoly {
        let mut r = self.space.zero();
        for i in 0..self.k() {
            if !x.data[i][c].is_zero() {
                r.add_scaled(&self.space.coord(i), &x.data[i][c]);
            }
        }
        r
    }

    /// Matrix of brackets `{z_a, z_c}` induced by `π`.
    pub fn bracket_matrix(&self, pi: &SuperPoly) -> Vec<Vec<SuperPoly>> {
        let k = self.k();
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|c| self.space.bracket(pi, &self.space.coord(a), &self.space.coord(c)))
                    .collect()
            })
            .collect()
    }

    /// `φ_V`, the lift of the Cartan trivector.
    pub fn phi_v(&self) -> SuperPoly {
        self.rep.lift_wedge(&self.space, &self.g.cartan_trivector())
    }

    fn defining(&self, a: usize) -> SuperMatrix {
        SuperMatrix::from_rational(self.space.table(), &self.g.basis[a])
    }

    fn defining_dual(&self, a: usize) -> SuperMatrix {
        SuperMatrix::from_rational(self.space.table(), &self.g.dual_matrix(a))
    }

    /// Weight of coordinate `i` under the Cartan elements.
    pub fn coord_weight(&self, i: usize) -> Vec<Q> {
        self.g
            .cartan
            .iter()
            .map(|&h| self.rep.actions[h].data[i][i].clone())
            .collect()
    }

    /// Weight of basis element `x` of the algebra.
    pub fn root(&self, x: usize) -> Vec<Q> {
        self.g
            .cartan
            .iter()
            .map(|&h| self.g.brackets[h][x][x].clone())
            .collect()
    }
}

/// Constant bivector `π_B` with `{z_i, z_j} = 2B(z_i, z_j)`.
pub fn bilinear_bivector(s: &MomentSetting) -> Result<SuperPoly> {
    let b = s.form()?.clone();
    let k = s.k();
    let mut pi = s.space.zero();
    for a in 0..k {
        let start = if s.rep.parity == Parity::Odd { a } else { a + 1 };
        for c in start..k {
            if b.data[a][c].is_zero() {
                continue;
            }
            let mono = s.space.theta(a).mul(&s.space.theta(c));
            let val = s.space.bracket(&mono, &s.space.coord(a), &s.space.coord(c)).body();
            if val.is_zero() {
                return Err(Error::Construction("degenerate bivector monomial".into()));
            }
            pi.add_scaled(&mono, &(qi(2) * &b.data[a][c] / val));
        }
    }
    for a in 0..k {
        for c in 0..k {
            let v = s.space.bracket(&pi, &s.space.coord(a), &s.space.coord(c));
            if v != s.space.constant(qi(2) * &b.data[a][c]) {
                return Err(Error::Construction("form has the wrong symmetry for this parity".into()));
            }
        }
    }
    Ok(pi)
}

/// Quadratic moment map, one component `⟨μ, y_x⟩` per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMap {
    pub components: Vec<SuperPoly>,
}

impl MomentMap {
    /// `μ_g = Σ_x ⟨μ, y_x⟩ y^x` in the defining representation.
    pub fn g_valued(&self, s: &MomentSetting) -> SuperMatrix {
        let mut m = SuperMatrix::zero(s.space.table(), s.g.n);
        for (x, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&s.defining_dual(x).scale_poly(c));
            }
        }
        m.with_rep("defining")
    }

    /// Components of a `g`-valued matrix along the basis: `ν = Σ_x ν_x y_x`.
    pub fn components_of(s: &MomentSetting, m: &SuperMatrix) -> Vec<SuperPoly> {
        (0..s.g.dim())
            .map(|x| m.mul(&s.defining_dual(x)).trace())
            .collect()
    }

    /// Scaled copy, used to exhibit failing inputs.
    pub fn scale(&self, c: &Q) -> MomentMap {
        MomentMap {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

/// `⟨μ, x⟩ = ¼ Σ_c (x.z_c) z_c*`, with `z_c*` defined by `B(z_c*, z_i) = δ_ci`.
pub fn moment_map(s: &MomentSetting) -> Result<MomentMap> {
    let b = s.form()?;
    let u = b.transpose().inverse()?;
    let k = s.k();
    let duals: Vec<SuperPoly> = (0..k)
        .map(|c| {
            let mut p = s.space.zero();
            for i in 0..k {
                if !u.data[i][c].is_zero() {
                    p.add_scaled(&s.space.coord(i), &u.data[i][c]);
                }
            }
            p
        })
        .collect();
    let components = (0..s.g.dim())
        .map(|x| {
            let m = &s.rep.actions[x];
            let mut r = s.space.zero();
            for (c, dual) in duals.iter().enumerate() {
                let xc = s.act_on_coord(m, c);
                if !xc.is_zero() {
                    r.add_assign(&xc.mul(dual));
                }
            }
            r.scale(&q(1, 4))
        })
        .collect();
    Ok(MomentMap { components })
}

/// Checks `{⟨μ,x⟩, z_c} = x_V(z_c)` for every basis `x` and coordinate `z_c`.
pub fn check_hamiltonian(s: &MomentSetting, pi: &SuperPoly, mu: &MomentMap) -> CheckReport {
    let mut res = Vec::new();
    for x in 0..s.g.dim() {
        for c in 0..s.k() {
            let lhs = s.space.bracket(pi, &mu.components[x], &s.space.coord(c));
            res.push(lhs.sub(&s.act_on_coord(&s.rep.actions[x], c)));
        }
    }
    CheckReport::new("hamiltonian", &res, s.compare_order())
}

/// `π_r = t_V`.
pub fn rmatrix_bivector(s: &MomentSetting, r: &RMatrixData) -> SuperPoly {
    s.rep.lift_tensor2(&s.space, &r.t)
}

/// `Λ_V` with `Λ = t/2`.
pub fn twist_bivector(s: &MomentSetting, r: &RMatrixData) -> SuperPoly {
    s.rep.lift_tensor2(&s.space, &r.lambda)
}

/// Compares `[[π, π]]` with `expected`.
pub fn check_quasi_poisson(s: &MomentSetting, pi: &SuperPoly, expected: &SuperPoly) -> CheckReport {
    let sq = s.space.schouten(pi, pi);
    CheckReport::new("quasi-poisson", &[sq.sub(expected)], s.compare_order())
}

/// Matrix of `ad_μ` on the algebra: column `a` holds `[μ_g, y_a]`.
pub fn ad_mu_matrix(s: &MomentSetting, mu: &MomentMap) -> SuperMatrix {
    let d = s.g.dim();
    let mut m = SuperMatrix::zero(s.space.table(), d);
    for x in 0..d {
        let c = &mu.components[x];
        if c.is_zero() {
            continue;
        }
        let dual = s.g.dual_coords(x);
        let ad = s.g.ad_matrix(&dual);
        for a in 0..d {
            for b in 0..d {
                if !ad.data[b][a].is_zero() {
                    m.entries[b][a].add_scaled(c, &ad.data[b][a]);
                }
            }
        }
    }
    m
}

/// Smallest `k` with `ad_μ^k = 0`.
pub fn ad_mu_nilpotency(s: &MomentSetting, mu: &MomentMap) -> Result<usize> {
    let m = ad_mu_matrix(s, mu);
    let mut p = SuperMatrix::identity(s.space.table(), s.g.dim());
    for k in 1..=SERIES_LIMIT {
        p = p.mul(&m);
        if p.is_zero() {
            return Ok(k);
        }
    }
    Err(Error::NonTerminating(format!("ad_mu is not nilpotent below {SERIES_LIMIT}")))
}

/// Bernoulli numbers `B_0 … B_m` with `B_1 = −1/2`.
pub fn bernoulli(m: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for n in 1..=m {
        let mut s = Q::zero();
        let mut binom = Q::one();
        for (k, bk) in b.iter().enumerate() {
            s += &binom * bk;
            binom = binom * qi((n + 1 - k) as i64) / qi((k + 1) as i64);
        }
        b.push(-s / qi((n + 1) as i64));
    }
    b
}

/// Coefficients `c_k` of `φ(s) = Σ_k c_k s^{2k−1}`, i.e. `c_k = −B_{2k}/(2k)!`.
pub fn phi_series(terms: usize) -> Vec<Q> {
    let b = bernoulli(2 * terms);
    (1..=terms)
        .map(|k| {
            let fact = (1..=2 * k).fold(Q::one(), |acc, i| acc * qi(i as i64));
            -b[2 * k].clone() / fact
        })
        .collect()
}

/// `r_dyn(μ) = ½ Σ_a (y^a)_V · (φ(ad_μ) y_a)_V`.
pub fn dynamical_correction(s: &MomentSetting, mu: &MomentMap) -> Result<SuperPoly> {
    let k = ad_mu_nilpotency(s, mu)?;
    let m = ad_mu_matrix(s, mu);
    let d = s.g.dim();
    let coeffs = phi_series(k.div_ceil(2).max(1));
    let m2 = m.mul(&m);
    let mut pw = m.clone();
    let mut a = SuperMatrix::zero(s.space.table(), d);
    for c in &coeffs {
        if pw.is_zero() {
            break;
        }
        a = a.add(&pw.scale(c));
        pw = pw.mul(&m2);
    }
    let mut r = s.space.zero();
    for col in 0..d {
        let mut image = s.space.zero();
        for row in 0..d {
            let e = &a.entries[row][col];
            if !e.is_zero() {
                image.add_assign(&e.mul(&s.fields[row]));
            }
        }
        if image.is_zero() {
            continue;
        }
        let dual_field = s.rep.vector_field(&s.space, &s.g.dual_coords(col));
        r.add_assign(&dual_field.mul(&image));
    }
    Ok(r.scale(&q(1, 2)))
}

/// `Φ = exp(μ_g)` and the highest power contributing to the series.
pub fn exp_moment(s: &MomentSetting, mu: &MomentMap) -> Result<(SuperMatrix, usize)> {
    mu.g_valued(s).exp(s.truncation)
}

/// Group-valued moment map condition, realised in the defining representation:
/// for every basis `x` and coordinate `z_c`,
/// `Σ_a tr(X Φ⁻¹ ∂Φ/∂z_a) {z_a, z_c} = ½ x_V(z_c) + ½ (Ad_Φ x)_V(z_c)`.
pub fn check_group_moment(s: &MomentSetting, pi: &SuperPoly, phi: &SuperMatrix) -> Result<CheckReport> {
    Ok(CheckReport::new("group-moment", &group_moment_residuals(s, pi, phi)?, s.compare_order()))
}

pub fn group_moment_residuals(s: &MomentSetting, pi: &SuperPoly, phi: &SuperMatrix) -> Result<Vec<SuperPoly>> {
    let n = s.truncation;
    let inv = phi.inverse(n)?;
    let br = s.bracket_matrix(pi);
    let k = s.k();
    let dphi: Vec<SuperMatrix> = (0..k).map(|a| phi.partial_right(a)).collect();
    let mut out = Vec::new();
    for x in 0..s.g.dim() {
        let xm = s.defining(x);
        let xp = xm.mul_trunc(&inv, n);
        let cs: Vec<SuperPoly> = dphi.iter().map(|d| xp.mul_trunc(d, n).trace()).collect();
        let adx = phi.mul_trunc(&xm, n).mul_trunc(&inv, n);
        let us: Vec<SuperPoly> = (0..s.g.dim())
            .map(|y| adx.mul_trunc(&s.defining_dual(y), n).trace())
            .collect();
        for c in 0..k {
            let mut lhs = s.space.zero();
            for a in 0..k {
                if !cs[a].is_zero() && !br[a][c].is_zero() {
                    lhs.add_assign(&cs[a].mul_trunc(&br[a][c], n));
                }
            }
            let mut rhs = s.act_on_coord(&s.rep.actions[x], c);
            for (y, u) in us.iter().enumerate() {
                if !u.is_zero() {
                    rhs.add_assign(&u.mul_trunc(&s.act_on_coord(&s.rep.actions[y], c), n));
                }
            }
            out.push(lhs.sub(&rhs.scale(&q(1, 2))));
        }
    }
    Ok(out)
}

/// Dual-group moment map condition: for every basis `x` and coordinate `z_c`,
/// `Σ_a κ tr((∂L₊/∂z_a L₊⁻¹ − ∂L₋/∂z_a L₋⁻¹) X) {z_a, z_c} = x_V(z_c)`.
pub fn check_lu_moment(s: &MomentSetting, pi: &SuperPoly, l: &GStarElement, kappa: &Q) -> Result<CheckReport> {
    let n = s.truncation;
    l.validate(n)?;
    let lpi = l.l_plus.inverse(n)?;
    let lmi = l.l_minus.inverse(n)?;
    let br = s.bracket_matrix(pi);
    let k = s.k();
    let forms: Vec<SuperMatrix> = (0..k)
        .map(|a| {
            l.l_plus
                .partial_right(a)
                .mul_trunc(&lpi, n)
                .sub(&l.l_minus.partial_right(a).mul_trunc(&lmi, n))
        })
        .collect();
    let mut res = Vec::new();
    for x in 0..s.g.dim() {
        let xm = s.defining(x);
        let cs: Vec<SuperPoly> = forms
            .iter()
            .map(|f| f.mul_trunc(&xm, n).trace().scale(kappa))
            .collect();
        for c in 0..k {
            let mut lhs = s.space.zero();
            for a in 0..k {
                if !cs[a].is_zero() && !br[a][c].is_zero() {
                    lhs.add_assign(&cs[a].mul_trunc(&br[a][c], n));
                }
            }
            res.push(lhs.sub(&s.act_on_coord(&s.rep.actions[x], c)));
        }
    }
    Ok(CheckReport::new("lu-moment", &res, s.compare_order()).with_detail(format!("kappa = {kappa}")))
}

/// Checks that the substitution `images` maps the bracket of `pi_new` to that
/// of `pi_old`: `{φ(z_a), φ(z_b)}_old = φ({z_a, z_b}_new)`.
pub fn check_change_of_variables(
    s: &MomentSetting,
    pi_old: &SuperPoly,
    pi_new: &SuperPoly,
    images: &[Option<SuperPoly>],
) -> Result<CheckReport> {
    let table = s.space.table();
    let mut full: Vec<Option<SuperPoly>> = images.to_vec();
    full.resize(table.len(), None);
    let k = s.k();
    let mapped: Vec<SuperPoly> = (0..k)
        .map(|a| s.space.coord(a).substitute(&full, table))
        .collect::<Result<_>>()?;
    let mut res = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let lhs = s.space.bracket(pi_old, &mapped[a], &mapped[b]);
            let rhs = s
                .space
                .bracket(pi_new, &s.space.coord(a), &s.space.coord(b))
                .substitute(&full, table)?;
            res.push(lhs.sub(&rhs));
        }
    }
    Ok(CheckReport::new("change-of-variables", &res, s.compare_order()))
}

// ---------------------------------------------------------------------------
// Fusion on W = V ⊕ V* for sl(n)

/// Ingredients and result of the fusion construction on `W = V ⊕ V*`.
#[derive(Clone, Debug)]
pub struct FusionData {
    pub setting: MomentSetting,
    pub rmatrix: RMatrixData,
    pub n: usize,
    pub parity: Parity,
    pub c: Q,
    pub lambda_w: SuperPoly,
    pub psi_w: SuperPoly,
    pub pi_cor: SuperPoly,
    pub pi_w: SuperPoly,
    pub pi_w_second: SuperPoly,
    pub pi_b: SuperPoly,
}

/// `c = −(−1)^s/2 − 1/(2n)`.
pub fn fusion_constant(n: usize, parity: Parity) -> Q {
    let sign = if parity == Parity::Odd { qi(1) } else { qi(-1) };
    sign * q(1, 2) - q(1, 2 * n as i64)
}

/// `π_W = −Λ_W − ψ_W − c π_cor` for `sl(n)` on `V ⊕ V*`.
pub fn fusion_bivector(n: usize, parity: Parity, truncation: u32) -> Result<FusionData> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!("fusion for sl({n}) outside 2..=4")));
    }
    let g = LieAlgebra::build(crate::liealg::Family::Sl, n)?;
    let expr = ModuleExpr::Sum(vec![ModuleExpr::Vector, ModuleExpr::Dual(Box::new(ModuleExpr::Vector))]);
    let rep = ModuleRep::build(&g, &expr, parity)?;
    let s = MomentSetting::new(rep, truncation)?;
    let r = g.standard_r_matrix();
    let lambda_w = twist_bivector(&s, &r);
    let psi_w = fusion_psi(&s);
    let (zv, zw) = euler_fields(&s);
    let pi_cor = zv.mul(&zw);
    let c = fusion_constant(n, parity);
    let base = lambda_w.add(&psi_w).neg();
    let pi_w = base.sub(&pi_cor.scale(&c));
    let mut cross = s.space.zero();
    for i in 0..n {
        for j in 0..n {
            let t = s
                .space
                .coord(n + j)
                .mul(&s.space.coord(i))
                .mul(&s.space.theta(i))
                .mul(&s.space.theta(n + j));
            cross.add_assign(&t);
        }
    }
    let pi_w_second = base
        .add(&pi_cor.scale(&q(1, 2 * n as i64)))
        .add(&cross.scale(&q(1, 2)));
    let pi_b = bilinear_bivector(&s)?;
    Ok(FusionData {
        setting: s,
        rmatrix: r,
        n,
        parity,
        c,
        lambda_w,
        psi_w,
        pi_cor,
        pi_w,
        pi_w_second,
        pi_b,
    })
}

/// `ψ_W = ½ Σ_a (y_a)_V (y^a)_{V*}` with each factor acting on one summand.
pub fn fusion_psi(s: &MomentSetting) -> SuperPoly {
    let mut psi = s.space.zero();
    for a in 0..s.g.dim() {
        let left = s.rep.block_vector_field(&s.space, &s.g.unit(a), 0);
        let right = s.rep.block_vector_field(&s.space, &s.g.dual_coords(a), 1);
        psi.add_assign(&left.mul(&right));
    }
    psi.scale(&q(1, 2))
}

/// `(Σ v_i ∂v_i, Σ w_j ∂w_j)`.
pub fn euler_fields(s: &MomentSetting) -> (SuperPoly, SuperPoly) {
    let n = s.k() / 2;
    let mut zv = s.space.zero();
    let mut zw = s.space.zero();
    for i in 0..n {
        zv.add_assign(&s.space.coord(i).mul(&s.space.theta(i)));
        zw.add_assign(&s.space.coord(n + i).mul(&s.space.theta(n + i)));
    }
    (zv, zw)
}

/// Field of an arbitrary `gl(n)` matrix on `V` (block 0) or `V*` (block 1).
pub fn gl_field(s: &MomentSetting, m: &RatMatrix, block: usize) -> SuperPoly {
    let n = s.k() / 2;
    let mut full = RatMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            if block == 0 {
                full.data[i][j] = m.data[i][j].clone();
            } else {
                full.data[n + i][n + j] = -m.data[j][i].clone();
            }
        }
    }
    s.space.linear_vector_field(&full.data)
}

impl FusionData {
    /// The constant solving `[[π_B, −Λ_W − ψ_W − c π_cor]] = 0`, if unique.
    pub fn derived_constant(&self) -> Option<Q> {
        let sp = &self.setting.space;
        let r0 = sp.schouten(&self.pi_b, &self.lambda_w.add(&self.psi_w).neg());
        let r1 = sp.schouten(&self.pi_b, &self.pi_cor);
        if r1.is_zero() {
            return None;
        }
        let (m, v) = r1.terms().iter().next()?;
        let c = r0.terms().get(m).cloned().unwrap_or_else(Q::zero) / v;
        if r0.sub(&r1.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// `ψ^gl_W − ψ_W − (1/2n) z_V z_{V*}`, which vanishes.
    pub fn psi_gl_residual(&self) -> SuperPoly {
        let s = &self.setting;
        let n = self.n;
        let mut psi_gl = s.space.zero();
        for i in 0..n {
            for j in 0..n {
                let a = gl_field(s, &RatMatrix::unit(n, i, j), 0);
                let b = gl_field(s, &RatMatrix::unit(n, j, i), 1);
                psi_gl.add_assign(&a.mul(&b));
            }
        }
        psi_gl = psi_gl.scale(&q(1, 2));
        let id = RatMatrix::identity(n);
        let z = gl_field(s, &id, 0).mul(&gl_field(s, &id, 1));
        psi_gl.sub(&self.psi_w).sub(&z.scale(&q(1, 2 * n as i64)))
    }

    /// Residuals of `[[x_W, π_W]] = −δ(x)_W` for each basis element.
    pub fn lie_derivative_residuals(&self) -> Vec<SuperPoly> {
        let s = &self.setting;
        (0..s.g.dim())
            .map(|x| {
                let l = s.space.schouten(&s.fields[x], &self.pi_w);
                let delta = s.rep.lift_tensor2(&s.space, &self.rmatrix.cobracket[x]);
                l.add(&delta)
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Higher-order correction of the moment map

/// Solution of the group-valued moment problem with a quartic correction.
#[derive(Clone, Debug)]
pub struct QuarticCorrection {
    /// Components `ν_x` along the basis, `ν_g = Σ_x ν_x y_x`.
    pub components: Vec<SuperPoly>,
    pub phi: SuperMatrix,
    pub unknowns: usize,
    pub free_parameters: usize,
}

/// Quartic monomials of matching weight for every basis element.
fn quartic_ansatz(s: &MomentSetting) -> Vec<(usize, SuperPoly)> {
    let k = s.k();
    let weights: Vec<Vec<Q>> = (0..k).map(|i| s.coord_weight(i)).collect();
    let mut monos: Vec<(Vec<usize>, Vec<Q>)> = Vec::new();
    let odd = s.rep.parity == Parity::Odd;
    let mut idx = vec![0usize; 4];
    fn rec(
        pos: usize,
        start: usize,
        k: usize,
        odd: bool,
        idx: &mut Vec<usize>,
        weights: &[Vec<Q>],
        out: &mut Vec<(Vec<usize>, Vec<Q>)>,
    ) {
        if pos == 4 {
            let mut w = vec![Q::zero(); weights[0].len()];
            for &i in idx.iter() {
                for (a, b) in w.iter_mut().zip(&weights[i]) {
                    *a += b;
                }
            }
            out.push((idx.clone(), w));
            return;
        }
        for i in start..k {
            idx[pos] = i;
            rec(pos + 1, if odd { i + 1 } else { i }, k, odd, idx, weights, out);
        }
    }
    rec(0, 0, k, odd, &mut idx, &weights, &mut monos);
    let mut out = Vec::new();
    for x in 0..s.g.dim() {
        let rx = s.root(x);
        for (m, w) in &monos {
            if w.iter().zip(&rx).all(|(a, b)| (a + b).is_zero()) {
                let p = SuperPoly::product_of(s.space.table(), Q::one(), m);
                out.push((x, p));
            }
        }
    }
    out
}

/// Finds a quartic correction `q` so that `exp(μ_g + q)` is a group-valued
/// moment map for `pi`. The residual is affine in `q` because `q` has degree
/// four and the series are computed exactly on odd modules.
pub fn solve_quartic_correction(s: &MomentSetting, pi: &SuperPoly, mu: &MomentMap) -> Result<Option<QuarticCorrection>> {
    let base = mu.g_valued(s);
    let ansatz = quartic_ansatz(s);
    let residual = |m: &SuperMatrix| -> Result<Vec<SuperPoly>> {
        let (phi, _) = m.exp(s.truncation)?;
        group_moment_residuals(s, pi, &phi)
    };
    let flatten = |res: &[SuperPoly]| -> Vec<(usize, crate::superalgebra::Monomial, Q)> {
        res.iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (i, m.clone(), c.clone())))
            .collect()
    };
    let r0 = residual(&base)?;
    let cols: Vec<Vec<(usize, crate::superalgebra::Monomial, Q)>> = crate::par_map(
        crate::ExecMode::default(),
        &ansatz,
        |(x, p)| -> Vec<(usize, crate::superalgebra::Monomial, Q)> {
            let m = base.add(&SuperMatrix::from_rational(s.space.table(), &s.g.basis[*x]).scale_poly(p));
            match residual(&m) {
                Ok(r) => {
                    let diff: Vec<SuperPoly> = r.iter().zip(&r0).map(|(a, b)| a.sub(b)).collect();
                    flatten(&diff)
                }
                Err(_) => Vec::new(),
            }
        },
    );
    let mut keys: std::collections::BTreeMap<(usize, crate::superalgebra::Monomial), usize> =
        std::collections::BTreeMap::new();
    let mut key_of = |i: usize, m: &crate::superalgebra::Monomial| -> usize {
        let len = keys.len();
        *keys.entry((i, m.clone())).or_insert(len)
    };
    let mut rows: std::collections::BTreeMap<usize, (SparseRow, Q)> = std::collections::BTreeMap::new();
    for (i, m, c) in flatten(&r0) {
        let kidx = key_of(i, &m);
        rows.entry(kidx).or_insert_with(|| (SparseRow::default(), Q::zero())).1 = -c;
    }
    for (j, col) in cols.iter().enumerate() {
        for (i, m, c) in col {
            let kidx = key_of(*i, m);
            rows.entry(kidx)
                .or_insert_with(|| (SparseRow::default(), Q::zero()))
                .0
                .add_entry(j, c.clone());
        }
    }
    let system: Vec<(SparseRow, Q)> = rows.into_values().collect();
    let Some((sol, free)) = solve_affine(&system, ansatz.len()) else {
        return Ok(None);
    };
    let mut m = base.clone();
    for ((x, p), c) in ansatz.iter().zip(&sol) {
        if !c.is_zero() {
            m = m.add(&SuperMatrix::from_rational(s.space.table(), &s.g.basis[*x]).scale_poly(&p.scale(c)));
        }
    }
    let (phi, _) = m.exp(s.truncation)?;
    if group_moment_residuals(s, pi, &phi)?.iter().any(|r| !r.is_zero()) {
        return Ok(None);
    }
    Ok(Some(QuarticCorrection {
        components: MomentMap::components_of(s, &m),
        phi,
        unknowns: ansatz.len(),
        free_parameters: free,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
    }

    #[test]
    fn phi_series_values() {
        let c = phi_series(3);
        assert_eq!(c, vec![q(-1, 12), q(1, 720), q(-1, 30240)]);
    }

    #[test]
    fn adjoint_bilinear_bivector() {
        let s = MomentSetting::parse("sl(2):adjoint:odd", 8).unwrap();
        let pi = bilinear_bivector(&s).unwrap();
        assert_eq!(pi, s.space.parse("2*∂xi2*∂xim2 + 2*∂xi0^2").unwrap());
    }

    #[test]
    fn hamiltonian_passes_and_scaled_fails() {
        for spec in ["sl(2):adjoint:odd", "sl(2):v1:even"] {
            let s = MomentSetting::parse(spec, 8).unwrap();
            let pi = bilinear_bivector(&s).unwrap();
            let mu = moment_map(&s).unwrap();
            assert!(check_hamiltonian(&s, &pi, &mu).passed, "{spec}");
            assert!(!check_hamiltonian(&s, &pi, &mu.scale(&qi(2))).passed, "{spec}");
        }
    }

    #[test]
    fn zero_moment_has_zero_correction() {
        let s = MomentSetting::parse("sl(2):adjoint:odd", 8).unwrap();
        let mu = MomentMap {
            components: vec![s.space.zero(); 3],
        };
        assert!(dynamical_correction(&s, &mu).unwrap().is_zero());
    }

    #[test]
    fn fusion_constant_odd() {
        assert_eq!(fusion_constant(3, Parity::Odd), q(1, 3));
        assert_eq!(fusion_constant(2, Parity::Even), q(-3, 4));
    }
}
