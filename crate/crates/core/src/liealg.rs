//! Classical Lie algebras, their modules and the standard r-matrix.
//!
//! Every algebra is realised by matrices in its defining representation with a
//! diagonal Cartan subalgebra, so all basis elements are weight vectors. The
//! invariant form `B_g` is the trace form of the defining representation; for
//! `sl(2)` with basis `(e, h, f)` this gives `B(e,f) = 1` and `B(h,h) = 2`.
//!
//! Elements of `⋀²g` are alternating tensors `T = Σ T_ab y_a ⊗ y_b` read with
//! `x∧y = x⊗y − y⊗x`, so `t = e⊗f − f⊗e = e∧f`. The Cartan element is the
//! trilinear form `φ(x,y,z) = B(x,[y,z])/12`; as an element of `⋀³g` it carries
//! the coefficient `½B(y^a,[y^b,y^c])` on `y_a∧y_b∧y_c` (`a<b<c`), which is
//! `½ e∧h∧f` for `sl(2)`. Wedge products lift to multivector fields
//! multiplicatively, `x∧y ↦ x_V y_V`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, SparseRow};
use crate::multivector::MvSpace;
use crate::superalgebra::{q, qi, Parity, SuperPoly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Sl,
    So,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

/// Structure data of a matrix Lie algebra.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub family: Family,
    /// Size of the defining matrices.
    pub n: usize,
    pub labels: Vec<String>,
    pub basis: Vec<RatMatrix>,
    pub gram: RatMatrix,
    pub gram_inv: RatMatrix,
    /// `brackets[a][b]` = coordinates of `[y_a, y_b]`.
    pub brackets: Vec<Vec<Vec<Q>>>,
    pub cartan: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    /// Bilinear form preserved by the defining matrices (so and sp only).
    pub defining_form: Option<RatMatrix>,
}

pub const MAX_SL: usize = 4;
pub const MAX_SO: usize = 8;
pub const MAX_SP: usize = 6;

impl LieAlgebra {
    pub fn build(family: Family, n: usize) -> Result<Arc<LieAlgebra>> {
        let (labels, basis, form) = match family {
            Family::Sl => {
                if !(2..=MAX_SL).contains(&n) {
                    return Err(Error::Unsupported(format!("sl({n}) outside 2..={MAX_SL}")));
                }
                sl_basis(n)
            }
            Family::So => {
                if !(3..=MAX_SO).contains(&n) {
                    return Err(Error::Unsupported(format!("so({n}) outside 3..={MAX_SO}")));
                }
                so_basis(n)
            }
            Family::Sp => {
                if n % 2 != 0 || !(2..=MAX_SP).contains(&n) {
                    return Err(Error::Unsupported(format!("sp({n}) needs even n in 2..={MAX_SP}")));
                }
                sp_basis(n)
            }
        };
        if let Some(j) = &form {
            for x in &basis {
                let c = x.transpose().mul(j).add(&j.mul(x));
                if !c.is_zero() {
                    return Err(Error::Construction("basis element leaves the form".into()));
                }
            }
        }
        let d = basis.len();
        let mut gram = RatMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                gram.data[a][b] = basis[a].mul(&basis[b]).trace();
            }
        }
        let gram_inv = gram.inverse()?;
        let mut g = LieAlgebra {
            family,
            n,
            labels,
            basis,
            gram,
            gram_inv,
            brackets: Vec::new(),
            cartan: Vec::new(),
            positive: Vec::new(),
            negative: Vec::new(),
            defining_form: form,
        };
        let mut br = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                br[a][b] = g.coords(&g.basis[a].commutator(&g.basis[b]))?;
            }
        }
        g.brackets = br;
        let d0 = g.regular_element();
        for a in 0..d {
            if g.basis[a].is_diagonal() {
                g.cartan.push(a);
                continue;
            }
            let c = d0.commutator(&g.basis[a]);
            let (i, j) = first_nonzero(&g.basis[a]).expect("nonzero basis element");
            let lam = &c.data[i][j] / &g.basis[a].data[i][j];
            if c != g.basis[a].scale(&lam) {
                return Err(Error::Construction(format!("{} is not a root vector", g.labels[a])));
            }
            if lam.is_positive() {
                g.positive.push(a);
            } else {
                g.negative.push(a);
            }
        }
        Ok(Arc::new(g))
    }

    /// Parses `sl(2)`, `so(8)`, `sp(4)`.
    pub fn parse(spec: &str) -> Result<Arc<LieAlgebra>> {
        let s = spec.trim().replace(' ', "");
        let open = s.find('(').ok_or_else(|| Error::Parse(format!("algebra '{spec}' lacks '('")))?;
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("algebra '{spec}' lacks ')'")));
        }
        let fam = match &s[..open] {
            "sl" => Family::Sl,
            "so" => Family::So,
            "sp" => Family::Sp,
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        };
        let n: usize = s[open + 1..s.len() - 1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in '{spec}'")))?;
        LieAlgebra::build(fam, n)
    }

    pub fn name(&self) -> String {
        format!("{}({})", self.family, self.n)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse(format!("no basis element '{label}' in {}", self.name())))
    }

    fn regular_element(&self) -> RatMatrix {
        let n = self.n;
        let mut d = RatMatrix::zeros(n, n);
        match self.family {
            Family::Sl => {
                for i in 0..n {
                    d.data[i][i] = qi((n - i) as i64);
                }
            }
            Family::So | Family::Sp => {
                let m = n / 2;
                for i in 0..m {
                    d.data[i][i] = qi((m - i) as i64);
                    d.data[m + i][m + i] = qi(-((m - i) as i64));
                }
            }
        }
        d
    }

    /// Coordinates of a matrix in the basis, via the trace form.
    pub fn coords(&self, m: &RatMatrix) -> Result<Vec<Q>> {
        let d = self.dim();
        let pair: Vec<Q> = (0..d).map(|b| m.mul(&self.basis[b]).trace()).collect();
        let c: Vec<Q> = (0..d)
            .map(|a| (0..d).fold(Q::zero(), |acc, b| acc + &self.gram_inv.data[a][b] * &pair[b]))
            .collect();
        if self.matrix_of(&c) != *m {
            return Err(Error::Construction("matrix is not in the algebra".into()));
        }
        Ok(c)
    }

    pub fn matrix_of(&self, c: &[Q]) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for (a, x) in c.iter().enumerate() {
            if !x.is_zero() {
                m = m.lin(&self.basis[a], x);
            }
        }
        m
    }

    /// Coordinates of the `B_g`-dual basis element `y^a`.
    pub fn dual_coords(&self, a: usize) -> Vec<Q> {
        self.gram_inv.data[a].clone()
    }

    pub fn dual_matrix(&self, a: usize) -> RatMatrix {
        self.matrix_of(&self.dual_coords(a))
    }

    pub fn b_form(&self, u: &[Q], v: &[Q]) -> Q {
        let d = self.dim();
        let mut s = Q::zero();
        for a in 0..d {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if !v[b].is_zero() {
                    s += &u[a] * &self.gram.data[a][b] * &v[b];
                }
            }
        }
        s
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut r = vec![Q::zero(); d];
        for a in 0..d {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if v[b].is_zero() {
                    continue;
                }
                let s = &u[a] * &v[b];
                for (c, x) in self.brackets[a][b].iter().enumerate() {
                    if !x.is_zero() {
                        r[c] += &s * x;
                    }
                }
            }
        }
        r
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[a] = Q::one();
        v
    }

    /// Matrix of `ad_x` in the basis: column `b` holds `[x, y_b]`.
    pub fn ad_matrix(&self, x: &[Q]) -> RatMatrix {
        let d = self.dim();
        let mut m = RatMatrix::zeros(d, d);
        for b in 0..d {
            let c = self.bracket(x, &self.unit(b));
            for a in 0..d {
                m.data[a][b] = c[a].clone();
            }
        }
        m
    }

    pub fn check_jacobi(&self) -> bool {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let (ua, ub, uc) = (self.unit(a), self.unit(b), self.unit(c));
                    let t1 = self.bracket(&ua, &self.bracket(&ub, &uc));
                    let t2 = self.bracket(&ub, &self.bracket(&uc, &ua));
                    let t3 = self.bracket(&uc, &self.bracket(&ua, &ub));
                    if (0..d).any(|i| !(&t1[i] + &t2[i] + &t3[i]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check_form_invariance(&self) -> bool {
        let d = self.dim();
        (0..d).all(|x| {
            (0..d).all(|y| {
                (0..d).all(|z| {
                    let ux = self.unit(x);
                    let l = self.b_form(&self.bracket(&ux, &self.unit(y)), &self.unit(z));
                    let r = self.b_form(&self.unit(y), &self.bracket(&ux, &self.unit(z)));
                    (l + r).is_zero()
                })
            })
        })
    }

    /// Cartan trivector as an element of `⋀³g`.
    pub fn cartan_trivector(&self) -> Wedge {
        let d = self.dim();
        let mut w = Wedge::zero(3);
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let x = self.cartan_tensor_entry(a, b, c) * qi(6);
                    w.insert(vec![a, b, c], x);
                }
            }
        }
        w
    }

    /// `φ(y^a, y^b, y^c)`-type coefficient: `B(y^a,[y^b,y^c])/12`.
    pub fn cartan_tensor_entry(&self, a: usize, b: usize, c: usize) -> Q {
        let br = self.bracket(&self.dual_coords(b), &self.dual_coords(c));
        br[a].clone() / qi(12)
    }

    pub fn cartan_tensor(&self) -> Tensor3 {
        let d = self.dim();
        let mut t = Tensor3::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let x = self.cartan_tensor_entry(a, b, c);
                    if !x.is_zero() {
                        t.insert((a, b, c), x);
                    }
                }
            }
        }
        t
    }

    pub fn standard_r_matrix(self: &Arc<Self>) -> RMatrixData {
        let d = self.dim();
        let mut r = RatMatrix::zeros(d, d);
        for &h in &self.cartan {
            let dual = self.dual_coords(h);
            for (b, c) in dual.iter().enumerate() {
                if !c.is_zero() {
                    r.data[h][b] += c * q(1, 2);
                }
            }
        }
        for &p in &self.positive {
            let dual = self.dual_coords(p);
            for (b, c) in dual.iter().enumerate() {
                if !c.is_zero() {
                    r.data[p][b] += c.clone();
                }
            }
        }
        let t = r.sub(&r.transpose());
        let lambda = t.scale(&q(1, 2));
        let cobracket = (0..d)
            .map(|x| ad_tensor2(self, &self.unit(x), &lambda))
            .collect();
        RMatrixData {
            algebra: self.clone(),
            r,
            t,
            lambda,
            cobracket,
        }
    }

    pub fn render_element(&self, c: &[Q]) -> String {
        let parts: Vec<(Q, String)> = c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(a, x)| (x.clone(), self.labels[a].clone()))
            .collect();
        render_terms(&parts)
    }
}

fn first_nonzero(m: &RatMatrix) -> Option<(usize, usize)> {
    for i in 0..m.rows {
        for j in 0..m.cols {
            if !m.data[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn sl_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>, Option<RatMatrix>) {
    if n == 2 {
        return (
            vec!["e".into(), "h".into(), "f".into()],
            vec![
                RatMatrix::unit(2, 0, 1),
                RatMatrix::from_ints(&[&[1, 0], &[0, -1]]),
                RatMatrix::unit(2, 1, 0),
            ],
            None,
        );
    }
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(format!("E{}{}", i + 1, j + 1));
                basis.push(RatMatrix::unit(n, i, j));
            }
        }
    }
    for k in 0..n - 1 {
        let mut m = RatMatrix::zeros(n, n);
        m.data[k][k] = qi(1);
        m.data[k + 1][k + 1] = qi(-1);
        labels.push(format!("H{}", k + 1));
        basis.push(m);
    }
    (labels, basis, None)
}

/// Split symmetric form: pairs `i ↔ m+i`, plus a unit entry for odd size.
pub fn split_symmetric(n: usize) -> RatMatrix {
    let m = n / 2;
    let mut j = RatMatrix::zeros(n, n);
    for i in 0..m {
        j.data[i][m + i] = qi(1);
        j.data[m + i][i] = qi(1);
    }
    if n % 2 == 1 {
        j.data[n - 1][n - 1] = qi(1);
    }
    j
}

pub fn split_skew(n: usize) -> RatMatrix {
    let m = n / 2;
    let mut j = RatMatrix::zeros(n, n);
    for i in 0..m {
        j.data[i][m + i] = qi(1);
        j.data[m + i][i] = qi(-1);
    }
    j
}

fn so_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>, Option<RatMatrix>) {
    let j = split_symmetric(n);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut h = 0;
    for p in 0..n {
        for qq in p + 1..n {
            let x = RatMatrix::unit(n, p, qq).sub(&RatMatrix::unit(n, qq, p)).mul(&j);
            if x.is_diagonal() {
                h += 1;
                labels.push(format!("H{h}"));
            } else {
                labels.push(format!("A{}_{}", p + 1, qq + 1));
            }
            basis.push(x);
        }
    }
    (labels, basis, Some(j))
}

fn sp_basis(n: usize) -> (Vec<String>, Vec<RatMatrix>, Option<RatMatrix>) {
    let j = split_skew(n);
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut h = 0;
    for p in 0..n {
        for qq in p..n {
            let s = if p == qq {
                RatMatrix::unit(n, p, p)
            } else {
                RatMatrix::unit(n, p, qq).add(&RatMatrix::unit(n, qq, p))
            };
            let x = j.mul(&s);
            if x.is_diagonal() {
                h += 1;
                labels.push(format!("H{h}"));
            } else {
                labels.push(format!("S{}_{}", p + 1, qq + 1));
            }
            basis.push(x);
        }
    }
    (labels, basis, Some(j))
}

/// `ad_x` applied to a 2-tensor `Σ T_ab y_a ⊗ y_b`.
pub fn ad_tensor2(g: &LieAlgebra, x: &[Q], t: &RatMatrix) -> RatMatrix {
    let ad = g.ad_matrix(x);
    ad.mul(t).add(&t.mul(&ad.transpose()))
}

/// Element of `⋀^k g` stored by strictly increasing index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub k: usize,
    pub coeffs: BTreeMap<Vec<usize>, Q>,
}

impl Wedge {
    pub fn zero(k: usize) -> Wedge {
        Wedge {
            k,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, idx: Vec<usize>, c: Q) {
        if !c.is_zero() {
            *self.coeffs.entry(idx).or_insert_with(Q::zero) += c;
        }
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    /// Reads an alternating 2-tensor with `x∧y = x⊗y − y⊗x`.
    pub fn from_tensor2(t: &RatMatrix) -> Wedge {
        let mut w = Wedge::zero(2);
        for a in 0..t.rows {
            for b in a + 1..t.cols {
                w.insert(vec![a, b], t.data[a][b].clone());
            }
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn render(&self, labels: &[String]) -> String {
        let parts: Vec<(Q, String)> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                (
                    c.clone(),
                    idx.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join("∧"),
                )
            })
            .collect();
        render_terms(&parts)
    }
}

pub type Tensor3 = BTreeMap<(usize, usize, usize), Q>;

fn render_terms(parts: &[(Q, String)]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, name)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            s.push_str(&format!("{a}*"));
        }
        s.push_str(name);
    }
    s
}

/// Standard r-matrix, its antisymmetrisation `t = r − r^op`, the twist
/// `Λ = t/2` and the cobracket `δ(x) = ad_x(Λ)`.
#[derive(Debug, Clone)]
pub struct RMatrixData {
    pub algebra: Arc<LieAlgebra>,
    pub r: RatMatrix,
    pub t: RatMatrix,
    pub lambda: RatMatrix,
    pub cobracket: Vec<RatMatrix>,
}

impl RMatrixData {
    /// Checks `δ([x,y]) = ad_x δ(y) − ad_y δ(x)` on all basis pairs.
    pub fn cocycle_holds(&self) -> bool {
        let g = &self.algebra;
        let d = g.dim();
        for x in 0..d {
            for y in 0..d {
                let xy = g.bracket(&g.unit(x), &g.unit(y));
                let mut lhs = RatMatrix::zeros(d, d);
                for (c, v) in xy.iter().enumerate() {
                    if !v.is_zero() {
                        lhs = lhs.lin(&self.cobracket[c], v);
                    }
                }
                let rhs = ad_tensor2(g, &g.unit(x), &self.cobracket[y])
                    .sub(&ad_tensor2(g, &g.unit(y), &self.cobracket[x]));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Drinfeld bracket `[t12,t13] + [t12,t23] + [t13,t23]` of a 2-tensor.
pub fn drinfeld_bracket(g: &LieAlgebra, t: &RatMatrix) -> Tensor3 {
    let d = g.dim();
    let mut out = Tensor3::new();
    let mut add = |k: (usize, usize, usize), c: Q| {
        if c.is_zero() {
            return;
        }
        let e = out.entry(k).or_insert_with(Q::zero);
        *e += c;
    };
    let nz: Vec<(usize, usize, Q)> = (0..d)
        .flat_map(|a| (0..d).map(move |b| (a, b)))
        .filter(|&(a, b)| !t.data[a][b].is_zero())
        .map(|(a, b)| (a, b, t.data[a][b].clone()))
        .collect();
    for (a, b, c1) in &nz {
        for (p, qq, c2) in &nz {
            let s = c1 * c2;
            for (z, cz) in g.brackets[*a][*p].iter().enumerate() {
                add((z, *b, *qq), &s * cz);
            }
            for (z, cz) in g.brackets[*b][*p].iter().enumerate() {
                add((*a, z, *qq), &s * cz);
            }
            for (z, cz) in g.brackets[*b][*qq].iter().enumerate() {
                add((*a, *p, z), &s * cz);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Applies `ad_x` to a 3-tensor.
pub fn ad_tensor3(g: &LieAlgebra, x: &[Q], t: &Tensor3) -> Tensor3 {
    let ad = g.ad_matrix(x);
    let d = g.dim();
    let mut out = Tensor3::new();
    for ((a, b, c), v) in t {
        for z in 0..d {
            for (slot, src) in [(0, *a), (1, *b), (2, *c)] {
                let m = &ad.data[z][src];
                if m.is_zero() {
                    continue;
                }
                let key = match slot {
                    0 => (z, *b, *c),
                    1 => (*a, z, *c),
                    _ => (*a, *b, z),
                };
                *out.entry(key).or_insert_with(Q::zero) += m * v;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

// ---------------------------------------------------------------------------
// Module expressions

/// Expression tree describing a module built from the basic ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleExpr {
    Trivial,
    Vector,
    Adjoint,
    Spinor { plus: bool },
    Dual(Box<ModuleExpr>),
    Tensor(Vec<ModuleExpr>),
    Wedge(u32, Box<ModuleExpr>),
    Sym(u32, Box<ModuleExpr>),
    Sum(Vec<ModuleExpr>),
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

impl ModuleExpr {
    pub fn parse(src: &str) -> Result<ModuleExpr> {
        let toks = tokenize(src)?;
        let mut p = ExprParser { toks, pos: 0, src };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in module expression '{src}'")));
        }
        Ok(e)
    }

    /// Dimension predicted by the tree, or `None` if it does not fit in usize.
    pub fn dim(&self, g: &LieAlgebra) -> Result<usize> {
        Ok(match self {
            ModuleExpr::Trivial => 1,
            ModuleExpr::Vector => g.n,
            ModuleExpr::Adjoint => g.dim(),
            ModuleExpr::Spinor { .. } => {
                if g.family != Family::So || g.n % 2 != 0 {
                    return Err(Error::Construction(format!("spinors need so(2m), got {}", g.name())));
                }
                1 << (g.n / 2 - 1)
            }
            ModuleExpr::Dual(e) => e.dim(g)?,
            ModuleExpr::Tensor(v) => {
                let mut d = 1usize;
                for e in v {
                    d = d.saturating_mul(e.dim(g)?);
                }
                d
            }
            ModuleExpr::Wedge(k, e) => binom(e.dim(g)?, *k as usize),
            ModuleExpr::Sym(k, e) => {
                let n = e.dim(g)?;
                if n == 0 {
                    usize::from(*k == 0)
                } else {
                    binom(n + *k as usize - 1, *k as usize)
                }
            }
            ModuleExpr::Sum(v) => {
                let mut d = 0usize;
                for e in v {
                    d = d.saturating_add(e.dim(g)?);
                }
                d
            }
        })
    }

    pub fn summands(&self) -> Vec<ModuleExpr> {
        match self {
            ModuleExpr::Sum(v) => v.clone(),
            e => vec![e.clone()],
        }
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::Trivial => write!(f, "trivial"),
            ModuleExpr::Vector => write!(f, "v1"),
            ModuleExpr::Adjoint => write!(f, "adjoint"),
            ModuleExpr::Spinor { plus } => write!(f, "spinor{}", if *plus { '+' } else { '-' }),
            ModuleExpr::Dual(e) => write!(f, "dual({e})"),
            ModuleExpr::Tensor(v) => {
                let s: Vec<String> = v.iter().map(|e| paren(e)).collect();
                write!(f, "{}", s.join("*"))
            }
            ModuleExpr::Wedge(k, e) => write!(f, "wedge{k}({e})"),
            ModuleExpr::Sym(k, e) => write!(f, "sym{k}({e})"),
            ModuleExpr::Sum(v) => {
                let s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", s.join("+"))
            }
        }
    }
}

fn paren(e: &ModuleExpr) -> String {
    match e {
        ModuleExpr::Sum(_) => format!("({e})"),
        _ => e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Plus,
    Star,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            out.push(Tok::Plus);
            i += 1;
        } else if c == '*' {
            out.push(Tok::Star);
            i += 1;
        } else if c == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else if c.is_ascii_alphanumeric() {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut id: String = chars[s..i].iter().collect();
            if id == "spinor" && i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                id.push(chars[i]);
                i += 1;
            }
            out.push(Tok::Ident(id));
        } else {
            return Err(Error::Parse(format!("unexpected '{c}' in module expression '{src}'")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl ExprParser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Parse(format!("{m} in module expression '{}'", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {t:?}")))
        }
    }

    fn expr(&mut self) -> Result<ModuleExpr> {
        let mut v = vec![self.term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            v.push(self.term()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { ModuleExpr::Sum(v) })
    }

    fn term(&mut self) -> Result<ModuleExpr> {
        let mut v = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            v.push(self.factor()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { ModuleExpr::Tensor(v) })
    }

    fn factor(&mut self) -> Result<ModuleExpr> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let mut name = id.as_str();
                let mut dual = false;
                if name.len() > 4 && name.ends_with("dual") {
                    name = &name[..name.len() - 4];
                    dual = true;
                }
                let base = match name {
                    "v1" | "vector" => ModuleExpr::Vector,
                    "adjoint" | "ad" => ModuleExpr::Adjoint,
                    "trivial" | "1" => ModuleExpr::Trivial,
                    "spinor+" => ModuleExpr::Spinor { plus: true },
                    "spinor-" => ModuleExpr::Spinor { plus: false },
                    "dual" => {
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        ModuleExpr::Dual(Box::new(e))
                    }
                    other => {
                        let (kind, k) = if let Some(k) = other.strip_prefix("wedge") {
                            ("wedge", k)
                        } else if let Some(k) = other.strip_prefix("sym") {
                            ("sym", k)
                        } else {
                            return Err(self.err(&format!("unknown module '{other}'")));
                        };
                        let k: u32 = k.parse().map_err(|_| self.err("bad power"))?;
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        if kind == "wedge" {
                            ModuleExpr::Wedge(k, Box::new(e))
                        } else {
                            ModuleExpr::Sym(k, Box::new(e))
                        }
                    }
                };
                Ok(if dual { ModuleExpr::Dual(Box::new(base)) } else { base })
            }
            _ => Err(self.err("expected a module")),
        }
    }
}

// ---------------------------------------------------------------------------
// Sparse materialisation

/// Column-sparse matrix: `cols[j]` lists `(row, value)`.
pub type SparseMat = Vec<Vec<(usize, Q)>>;

/// Sparse action data of a module: weights of the basis vectors and the
/// actions of selected Lie-algebra basis elements.
#[derive(Clone, Debug)]
pub struct SparseRep {
    pub dim: usize,
    pub weights: Vec<Vec<Q>>,
    /// Lie-algebra basis indices whose actions are stored.
    pub elements: Vec<usize>,
    pub actions: Vec<SparseMat>,
}

pub const DIM_BOUND: usize = 20000;

fn dense_to_sparse(m: &RatMatrix) -> SparseMat {
    (0..m.cols)
        .map(|j| {
            (0..m.rows)
                .filter(|&i| !m.data[i][j].is_zero())
                .map(|i| (i, m.data[i][j].clone()))
                .collect()
        })
        .collect()
}

pub fn sparse_to_dense(m: &SparseMat, dim: usize) -> RatMatrix {
    let mut r = RatMatrix::zeros(dim, dim);
    for (j, col) in m.iter().enumerate() {
        for (i, v) in col {
            r.data[*i][j] = v.clone();
        }
    }
    r
}

fn leaf_rep(g: &LieAlgebra, mats: Vec<RatMatrix>, elements: &[usize]) -> Result<SparseRep> {
    let dim = mats.first().map_or(0, |m| m.rows);
    let mut weights = vec![Vec::with_capacity(g.cartan.len()); dim];
    for &h in &g.cartan {
        let m = &mats[h];
        if !m.is_diagonal() {
            return Err(Error::Construction("Cartan action is not diagonal".into()));
        }
        for (i, w) in weights.iter_mut().enumerate() {
            w.push(m.data[i][i].clone());
        }
    }
    Ok(SparseRep {
        dim,
        weights,
        elements: elements.to_vec(),
        actions: elements.iter().map(|&x| dense_to_sparse(&mats[x])).collect(),
    })
}

/// Fermionic oscillator realisation of `so(2m)` on `⋀(Q^m)`: returns the
/// action matrices on the even or odd half.
pub fn spinor_matrices(g: &LieAlgebra, plus: bool) -> Result<Vec<RatMatrix>> {
    if g.family != Family::So || g.n % 2 != 0 {
        return Err(Error::Construction(format!("spinors need so(2m), got {}", g.name())));
    }
    let m = g.n / 2;
    let full = 1usize << m;
    let gamma = |p: usize| -> RatMatrix {
        let mut r = RatMatrix::zeros(full, full);
        let (i, create) = if p < m { (p, true) } else { (p - m, false) };
        for s in 0..full {
            let occupied = s >> i & 1 == 1;
            if occupied == create {
                continue;
            }
            let t = s ^ (1 << i);
            let below = (s & ((1 << i) - 1)).count_ones();
            r.data[t][s] = if below % 2 == 0 { qi(1) } else { qi(-1) };
        }
        r
    };
    let gammas: Vec<RatMatrix> = (0..2 * m).map(gamma).collect();
    let jinv = g.defining_form.as_ref().expect("so form").inverse()?;
    let half: Vec<usize> = (0..full)
        .filter(|s| (s.count_ones() % 2 == 0) == plus)
        .collect();
    let mut out = Vec::with_capacity(g.dim());
    for x in &g.basis {
        let xj = x.mul(&jinv);
        let mut rho = RatMatrix::zeros(full, full);
        for p in 0..2 * m {
            for qq in 0..2 * m {
                let c = &xj.data[p][qq];
                if !c.is_zero() {
                    rho = rho.lin(&gammas[p].mul(&gammas[qq]), &(c * q(1, 2)));
                }
            }
        }
        let tr = rho.trace() / qi(full as i64);
        rho = rho.sub(&RatMatrix::identity(full).scale(&tr));
        let mut r = RatMatrix::zeros(half.len(), half.len());
        for (a, &sa) in half.iter().enumerate() {
            for (b, &sb) in half.iter().enumerate() {
                r.data[a][b] = rho.data[sa][sb].clone();
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn sorted_sign(v: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(neg)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn add_weights(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn push_entry(col: &mut BTreeMap<usize, Q>, i: usize, v: Q) {
    if v.is_zero() {
        return;
    }
    let e = col.entry(i).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        col.remove(&i);
    }
}

fn finish(col: BTreeMap<usize, Q>) -> Vec<(usize, Q)> {
    col.into_iter().collect()
}

/// Materialises a module expression with the actions of `elements`.
pub fn materialize(g: &LieAlgebra, e: &ModuleExpr, elements: &[usize]) -> Result<SparseRep> {
    let dim = e.dim(g)?;
    if dim > DIM_BOUND {
        return Err(Error::DimensionBound { dim, bound: DIM_BOUND });
    }
    let all: Vec<usize> = (0..g.dim()).collect();
    let rep = match e {
        ModuleExpr::Trivial => SparseRep {
            dim: 1,
            weights: vec![vec![Q::zero(); g.cartan.len()]],
            elements: elements.to_vec(),
            actions: elements.iter().map(|_| vec![Vec::new()]).collect(),
        },
        ModuleExpr::Vector => leaf_rep(g, g.basis.clone(), elements)?,
        ModuleExpr::Adjoint => {
            let mats: Vec<RatMatrix> = all.iter().map(|&x| g.ad_matrix(&g.unit(x))).collect();
            leaf_rep(g, mats, elements)?
        }
        ModuleExpr::Spinor { plus } => leaf_rep(g, spinor_matrices(g, *plus)?, elements)?,
        ModuleExpr::Dual(inner) => {
            let r = materialize(g, inner, elements)?;
            let actions = r
                .actions
                .iter()
                .map(|m| {
                    let mut cols: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); r.dim];
                    for (j, col) in m.iter().enumerate() {
                        for (i, v) in col {
                            push_entry(&mut cols[*i], j, -v.clone());
                        }
                    }
                    cols.into_iter().map(finish).collect()
                })
                .collect();
            SparseRep {
                dim: r.dim,
                weights: r.weights.iter().map(|w| w.iter().map(|x| -x.clone()).collect()).collect(),
                elements: elements.to_vec(),
                actions,
            }
        }
        ModuleExpr::Sum(v) => {
            let parts: Vec<SparseRep> = v.iter().map(|x| materialize(g, x, elements)).collect::<Result<_>>()?;
            let mut weights = Vec::new();
            let mut actions: Vec<SparseMat> = vec![Vec::new(); elements.len()];
            let mut off = 0;
            for p in &parts {
                weights.extend(p.weights.iter().cloned());
                for (k, m) in p.actions.iter().enumerate() {
                    for col in m {
                        actions[k].push(col.iter().map(|(i, v)| (i + off, v.clone())).collect());
                    }
                }
                off += p.dim;
            }
            SparseRep {
                dim: off,
                weights,
                elements: elements.to_vec(),
                actions,
            }
        }
        ModuleExpr::Tensor(v) => {
            let mut acc = materialize(g, &v[0], elements)?;
            for x in &v[1..] {
                let b = materialize(g, x, elements)?;
                acc = tensor_pair(&acc, &b, elements);
            }
            acc
        }
        ModuleExpr::Wedge(k, inner) | ModuleExpr::Sym(k, inner) => {
            let sym = matches!(e, ModuleExpr::Sym(..));
            let r = materialize(g, inner, elements)?;
            let k = *k as usize;
            let basis = if sym { multisets(r.dim, k) } else { subsets(r.dim, k) };
            let index: HashMap<Vec<usize>, usize> =
                basis.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
            let zero_w = vec![Q::zero(); g.cartan.len()];
            let weights = basis
                .iter()
                .map(|s| s.iter().fold(zero_w.clone(), |acc, &i| add_weights(&acc, &r.weights[i])))
                .collect();
            let actions = r
                .actions
                .iter()
                .map(|m| {
                    basis
                        .iter()
                        .map(|s| {
                            let mut col = BTreeMap::new();
                            for p in 0..k {
                                if sym && p > 0 && s[p] == s[p - 1] {
                                    continue;
                                }
                                let mult = if sym { s.iter().filter(|&&x| x == s[p]).count() } else { 1 };
                                for (row, v) in &m[s[p]] {
                                    let mut t = s.clone();
                                    t[p] = *row;
                                    if sym {
                                        t.sort_unstable();
                                        push_entry(&mut col, index[&t], v * qi(mult as i64));
                                    } else if let Some(neg) = sorted_sign(&mut t) {
                                        push_entry(&mut col, index[&t], if neg { -v.clone() } else { v.clone() });
                                    }
                                }
                            }
                            finish(col)
                        })
                        .collect()
                })
                .collect();
            SparseRep {
                dim: basis.len(),
                weights,
                elements: elements.to_vec(),
                actions,
            }
        }
    };
    debug_assert_eq!(rep.dim, dim);
    Ok(rep)
}

fn tensor_pair(a: &SparseRep, b: &SparseRep, elements: &[usize]) -> SparseRep {
    let dim = a.dim * b.dim;
    let mut weights = Vec::with_capacity(dim);
    for wa in &a.weights {
        for wb in &b.weights {
            weights.push(add_weights(wa, wb));
        }
    }
    let actions = (0..elements.len())
        .map(|k| {
            let (ma, mb) = (&a.actions[k], &b.actions[k]);
            let mut cols = Vec::with_capacity(dim);
            for i in 0..a.dim {
                for j in 0..b.dim {
                    let mut col = BTreeMap::new();
                    for (r, v) in &ma[i] {
                        push_entry(&mut col, r * b.dim + j, v.clone());
                    }
                    for (s, v) in &mb[j] {
                        push_entry(&mut col, i * b.dim + s, v.clone());
                    }
                    cols.push(finish(col));
                }
            }
            cols
        })
        .collect();
    SparseRep {
        dim,
        weights,
        elements: elements.to_vec(),
        actions,
    }
}

// ---------------------------------------------------------------------------
// Concrete modules with coordinates

/// A module with dense action matrices, coordinate names and an optional
/// invariant bilinear form.
#[derive(Debug, Clone)]
pub struct ModuleRep {
    pub algebra: Arc<LieAlgebra>,
    pub expr: ModuleExpr,
    pub parity: Parity,
    pub coord_names: Vec<String>,
    /// `actions[x]` is the matrix of basis element `x`: `x.v_j = Σ_i m[i][j] v_i`.
    pub actions: Vec<RatMatrix>,
    /// `form[i][j] = B(v_i, v_j)`.
    pub form: Option<RatMatrix>,
    /// Index ranges of the direct summands.
    pub blocks: Vec<std::ops::Range<usize>>,
    pub tag: String,
}

/// Parsed `algebra:module:parity` triple.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    pub algebra: Arc<LieAlgebra>,
    pub expr: ModuleExpr,
    pub parity: Parity,
}

impl ModuleSpec {
    pub fn parse(spec: &str) -> Result<ModuleSpec> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "module spec '{spec}' must look like algebra:module:parity"
            )));
        }
        let algebra = LieAlgebra::parse(parts[0])?;
        let expr = ModuleExpr::parse(parts[1])?;
        let parity = match parts[2].trim() {
            "odd" => Parity::Odd,
            "even" => Parity::Even,
            p => return Err(Error::Parse(format!("parity must be odd or even, got '{p}'"))),
        };
        Ok(ModuleSpec { algebra, expr, parity })
    }

    pub fn build(&self) -> Result<ModuleRep> {
        ModuleRep::build(&self.algebra, &self.expr, self.parity)
    }
}

fn leaf_letter(e: &ModuleExpr) -> &'static str {
    match e {
        ModuleExpr::Vector => "v",
        ModuleExpr::Dual(inner) if **inner == ModuleExpr::Vector => "w",
        ModuleExpr::Adjoint => "y",
        ModuleExpr::Spinor { .. } => "s",
        _ => "u",
    }
}

impl ModuleRep {
    pub fn build(g: &Arc<LieAlgebra>, expr: &ModuleExpr, parity: Parity) -> Result<ModuleRep> {
        let all: Vec<usize> = (0..g.dim()).collect();
        let summands = expr.summands();
        let mut actions: Vec<RatMatrix> = Vec::new();
        let mut blocks = Vec::new();
        let mut names = Vec::new();
        let mut used: Vec<&str> = Vec::new();
        let total = expr.dim(g)?;
        if total > 60 {
            return Err(Error::DimensionBound { dim: total, bound: 60 });
        }
        let spare = ["u", "p", "q", "r"];
        let mut off = 0;
        let mut parts = Vec::new();
        for s in &summands {
            let rep = materialize(g, s, &all)?;
            let mut letter = leaf_letter(s);
            if used.contains(&letter) {
                letter = spare.iter().find(|l| !used.contains(l)).copied().unwrap_or("z");
            }
            used.push(letter);
            let special = g.family == Family::Sl && g.n == 2 && summands.len() == 1;
            for i in 0..rep.dim {
                let name = match (special, s) {
                    (true, ModuleExpr::Adjoint) => ["xi2", "xi0", "xim2"][i].to_string(),
                    (true, ModuleExpr::Vector) => ["v1", "vm1"][i].to_string(),
                    _ => format!("{letter}{}", i + 1),
                };
                names.push(name);
            }
            blocks.push(off..off + rep.dim);
            off += rep.dim;
            parts.push(rep);
        }
        for x in 0..g.dim() {
            let mut m = RatMatrix::zeros(total, total);
            for (p, b) in parts.iter().zip(&blocks) {
                for (j, col) in p.actions[x].iter().enumerate() {
                    for (i, v) in col {
                        m.data[b.start + i][b.start + j] = v.clone();
                    }
                }
            }
            actions.push(m);
        }
        let mut rep = ModuleRep {
            algebra: g.clone(),
            expr: expr.clone(),
            parity,
            coord_names: names,
            actions,
            form: None,
            blocks,
            tag: module_tag(expr),
        };
        rep.form = rep.find_form(&summands)?;
        if let Some(b) = &rep.form {
            let symmetric = *b == b.transpose();
            let skew = *b == b.transpose().scale(&-Q::one());
            let ok = match parity {
                Parity::Odd => symmetric,
                Parity::Even => skew,
            };
            if !ok {
                return Err(Error::Construction(format!(
                    "invariant form on {expr} is {} but the module is declared {}",
                    if symmetric { "symmetric" } else { "skew" },
                    if parity == Parity::Odd { "odd" } else { "even" }
                )));
            }
        }
        Ok(rep)
    }

    pub fn parse(spec: &str) -> Result<ModuleRep> {
        ModuleSpec::parse(spec)?.build()
    }

    pub fn dim(&self) -> usize {
        self.coord_names.len()
    }

    fn find_form(&self, summands: &[ModuleExpr]) -> Result<Option<RatMatrix>> {
        let n = self.dim();
        if summands.len() == 2 && summands[1] == ModuleExpr::Dual(Box::new(summands[0].clone())) {
            let k = n / 2;
            let mut b = RatMatrix::zeros(n, n);
            let back = if self.parity == Parity::Odd { qi(1) } else { qi(-1) };
            for i in 0..k {
                b.data[i][k + i] = qi(1);
                b.data[k + i][i] = back.clone();
            }
            return Ok(Some(b));
        }
        let mut b = RatMatrix::zeros(n, n);
        for (s, blk) in summands.iter().zip(&self.blocks) {
            let local = if *s == ModuleExpr::Adjoint {
                self.algebra.gram.clone()
            } else {
                let acts: Vec<RatMatrix> = self
                    .actions
                    .iter()
                    .map(|m| {
                        let mut r = RatMatrix::zeros(blk.len(), blk.len());
                        for i in blk.clone() {
                            for j in blk.clone() {
                                r.data[i - blk.start][j - blk.start] = m.data[i][j].clone();
                            }
                        }
                        r
                    })
                    .collect();
                let forms = invariant_forms(&acts);
                if forms.len() != 1 {
                    return Ok(None);
                }
                forms.into_iter().next().unwrap()
            };
            for i in 0..blk.len() {
                for j in 0..blk.len() {
                    b.data[blk.start + i][blk.start + j] = local.data[i][j].clone();
                }
            }
        }
        Ok(Some(b))
    }

    /// Multivector space on the coordinates of this module.
    pub fn mv_space(&self) -> Result<MvSpace> {
        MvSpace::new(self.coord_names.iter().map(|n| (n.clone(), self.parity)).collect())
    }

    /// `x_V = Σ_{i,j} (x)_{ij} z_i ∂z_j` for a coordinate vector `x` over `g`.
    pub fn vector_field(&self, space: &MvSpace, x: &[Q]) -> SuperPoly {
        let m = self.action_of(x);
        space.linear_vector_field(&m.data)
    }

    pub fn action_of(&self, x: &[Q]) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.lin(&self.actions[a], c);
            }
        }
        m
    }

    /// Generating vector field of a basis element.
    pub fn generating_vector_field(&self, space: &MvSpace, a: usize) -> SuperPoly {
        space.linear_vector_field(&self.actions[a].data)
    }

    /// Generating vector field restricted to one direct summand.
    pub fn block_vector_field(&self, space: &MvSpace, x: &[Q], block: usize) -> SuperPoly {
        let m = self.action_of(x);
        let b = &self.blocks[block];
        let mut r = RatMatrix::zeros(m.rows, m.cols);
        for i in b.clone() {
            for j in b.clone() {
                r.data[i][j] = m.data[i][j].clone();
            }
        }
        space.linear_vector_field(&r.data)
    }

    /// Lift of a `⋀^k g` element: `y_a∧y_b ↦ (y_a)_V (y_b)_V`.
    pub fn lift_wedge(&self, space: &MvSpace, w: &Wedge) -> SuperPoly {
        let fields: Vec<SuperPoly> = (0..self.algebra.dim())
            .map(|a| self.generating_vector_field(space, a))
            .collect();
        let mut r = space.zero();
        for (idx, c) in &w.coeffs {
            let mut p = space.constant(c.clone());
            for &i in idx {
                p = p.mul(&fields[i]);
            }
            r.add_assign(&p);
        }
        r
    }

    pub fn lift_tensor2(&self, space: &MvSpace, t: &RatMatrix) -> SuperPoly {
        self.lift_wedge(space, &Wedge::from_tensor2(t))
    }

    /// Checks the invariance of the attached form.
    pub fn form_is_invariant(&self) -> bool {
        match &self.form {
            None => false,
            Some(b) => self
                .actions
                .iter()
                .all(|x| x.transpose().mul(b).add(&b.mul(x)).is_zero()),
        }
    }

    /// Checks `[x, y]`-action equals the commutator of the actions.
    pub fn is_representation(&self) -> bool {
        let g = &self.algebra;
        let d = g.dim();
        (0..d).all(|a| {
            (0..d).all(|b| {
                let lhs = self.action_of(&g.brackets[a][b]);
                lhs == self.actions[a].commutator(&self.actions[b])
            })
        })
    }
}

fn module_tag(e: &ModuleExpr) -> String {
    match e {
        ModuleExpr::Vector => "vector".into(),
        ModuleExpr::Adjoint => "adjoint".into(),
        ModuleExpr::Spinor { .. } => "spinor-oscillator".into(),
        ModuleExpr::Dual(_) => "dual".into(),
        ModuleExpr::Sum(_) => "direct-sum".into(),
        ModuleExpr::Wedge(..) => "exterior-power".into(),
        ModuleExpr::Sym(..) => "symmetric-power".into(),
        ModuleExpr::Tensor(_) => "tensor".into(),
        ModuleExpr::Trivial => "trivial".into(),
    }
}

/// Basis of invariant bilinear forms `B` with `XᵀB + BX = 0` for all `X`,
/// each normalised so its first nonzero entry is 1.
pub fn invariant_forms(actions: &[RatMatrix]) -> Vec<RatMatrix> {
    let n = actions.first().map_or(0, |m| m.rows);
    let idx = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::new();
    for x in actions {
        for i in 0..n {
            for j in 0..n {
                let mut r = SparseRow::default();
                for k in 0..n {
                    r.add_entry(idx(k, j), x.data[k][i].clone());
                    r.add_entry(idx(i, k), x.data[k][j].clone());
                }
                if !r.is_empty() {
                    rows.push(r);
                }
            }
        }
    }
    crate::linalg::nullspace(&rows, n * n)
        .into_iter()
        .map(|v| {
            let first = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Q::one);
            let mut b = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    b.data[i][j] = &v[idx(i, j)] / &first;
                }
            }
            b
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations_and_form() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        let (e, h, f) = (0, 1, 2);
        assert_eq!(g.brackets[h][e], g.unit(e).iter().map(|x| x * qi(2)).collect::<Vec<_>>());
        assert_eq!(g.brackets[h][f], g.unit(f).iter().map(|x| x * qi(-2)).collect::<Vec<_>>());
        assert_eq!(g.brackets[e][f], g.unit(h));
        assert_eq!(g.gram.data[e][f], qi(1));
        assert_eq!(g.gram.data[h][h], qi(2));
    }

    #[test]
    fn dimensions() {
        assert_eq!(LieAlgebra::parse("so(5)").unwrap().dim(), 10);
        assert_eq!(LieAlgebra::parse("sp(4)").unwrap().dim(), 10);
        assert_eq!(LieAlgebra::parse("so(8)").unwrap().dim(), 28);
        assert_eq!(LieAlgebra::parse("sl(4)").unwrap().dim(), 15);
        assert!(LieAlgebra::parse("sl(9)").is_err());
        assert!(LieAlgebra::parse("sp(3)").is_err());
    }

    #[test]
    fn jacobi_and_invariance() {
        for s in ["sl(2)", "sl(3)", "so(5)", "sp(4)", "so(6)"] {
            let g = LieAlgebra::parse(s).unwrap();
            assert!(g.check_jacobi(), "{s}");
            assert!(g.check_form_invariance(), "{s}");
        }
    }

    #[test]
    fn module_expression_parsing() {
        let e = ModuleExpr::parse("v1+v1dual").unwrap();
        assert_eq!(
            e,
            ModuleExpr::Sum(vec![ModuleExpr::Vector, ModuleExpr::Dual(Box::new(ModuleExpr::Vector))])
        );
        assert_eq!(ModuleExpr::parse("spinor+").unwrap(), ModuleExpr::Spinor { plus: true });
        let w = ModuleExpr::parse("dual(wedge3(v1))*sym3(v1)").unwrap();
        assert_eq!(w.to_string(), "dual(wedge3(v1))*sym3(v1)");
        assert!(ModuleExpr::parse("blah").is_err());
    }

    #[test]
    fn sl2_vector_form() {
        let m = ModuleRep::parse("sl(2):v1:even").unwrap();
        let b = m.form.clone().unwrap();
        assert_eq!(b.data[0][1], qi(1));
        assert_eq!(b.data[1][0], qi(-1));
        assert!(m.form_is_invariant());
    }

    #[test]
    fn parity_mismatch_rejected() {
        assert!(ModuleRep::parse("sl(2):v1:odd").is_err());
    }

    #[test]
    fn spinors_are_representations() {
        let g = LieAlgebra::parse("so(8)").unwrap();
        for plus in [true, false] {
            let m = ModuleRep::build(&g, &ModuleExpr::Spinor { plus }, Parity::Odd).unwrap();
            assert_eq!(m.dim(), 8);
            assert!(m.is_representation());
            assert!(m.form_is_invariant());
        }
    }

    #[test]
    fn generating_fields_sl2() {
        let m = ModuleRep::parse("sl(2):adjoint:odd").unwrap();
        let s = m.mv_space().unwrap();
        let ev = m.generating_vector_field(&s, 0);
        assert_eq!(ev, s.parse("xi0*∂xim2 - 2*xi2*∂xi0").unwrap());
        let v = ModuleRep::parse("sl(2):v1:even").unwrap();
        let sv = v.mv_space().unwrap();
        assert_eq!(v.generating_vector_field(&sv, 1), sv.parse("v1*∂v1 - vm1*∂vm1").unwrap());
    }

    #[test]
    fn r_matrix_sl2() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        let r = g.standard_r_matrix();
        assert_eq!(r.r.data[1][1], q(1, 4));
        assert_eq!(r.r.data[0][2], qi(1));
        assert_eq!(Wedge::from_tensor2(&r.t).render(&g.labels), "e∧f");
        assert!(Wedge::from_tensor2(&r.cobracket[1]).is_zero());
        assert!(r.cocycle_holds());
    }

    #[test]
    fn cartan_trivector_sl2() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        assert_eq!(g.cartan_trivector().render(&g.labels), "1/2*e∧h∧f");
    }
}
