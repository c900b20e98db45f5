//! Polynomial multivector fields on a linear supermanifold.
//!
//! A multivector field is stored as a supercommutative polynomial in the
//! coordinates `z_a` together with one generator `∂z_a` per coordinate, of
//! parity opposite to `z_a`. Derivations of odd coordinates are therefore even
//! and may appear squared, while derivations of even coordinates anticommute.
//!
//! The Schouten bracket is
//! `[[P,Q]] = Σ_a (P ∂⃖/∂θ_a)(∂⃗Q/∂z_a) − (P ∂⃖/∂z_a)(∂⃗Q/∂θ_a)`
//! and a bivector `π` induces the bracket
//! `{f,g} = (−1)^{|f|+1} [[[[π,f]],g]]`.

use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::superalgebra::{same_table, GeneratorTable, Parity, SuperPoly, Q};

/// Multivector fields share the polynomial representation.
pub type MultiVector = SuperPoly;

/// Coordinate system together with the generator table of its multivector
/// algebra.
#[derive(Debug, Clone)]
pub struct MvSpace {
    coords: Arc<GeneratorTable>,
    table: Arc<GeneratorTable>,
}

pub const DERIVATION_PREFIX: &str = "∂";

impl MvSpace {
    pub fn new(coords: Vec<(String, Parity)>) -> Result<MvSpace> {
        let mut gens = coords.clone();
        for (n, p) in &coords {
            gens.push((format!("{DERIVATION_PREFIX}{n}"), p.flip()));
        }
        Ok(MvSpace {
            coords: GeneratorTable::new(coords)?,
            table: GeneratorTable::new(gens)?,
        })
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn coord_table(&self) -> &Arc<GeneratorTable> {
        &self.coords
    }

    pub fn coord_parity(&self, a: usize) -> Parity {
        self.coords.parity(a)
    }

    pub fn coord_names(&self) -> &[String] {
        self.coords.names()
    }

    pub fn coord(&self, a: usize) -> SuperPoly {
        SuperPoly::generator(&self.table, a)
    }

    pub fn theta(&self, a: usize) -> SuperPoly {
        SuperPoly::generator(&self.table, self.dim() + a)
    }

    pub fn zero(&self) -> SuperPoly {
        SuperPoly::zero(&self.table)
    }

    pub fn constant(&self, c: Q) -> SuperPoly {
        SuperPoly::constant(&self.table, c)
    }

    pub fn parse(&self, src: &str) -> Result<SuperPoly> {
        SuperPoly::parse(&self.table, src)
    }

    fn theta_mask(&self) -> u64 {
        let k = self.dim();
        if 2 * k >= 64 {
            !((1u64 << k) - 1)
        } else {
            ((1u64 << (2 * k)) - 1) & !((1u64 << k) - 1)
        }
    }

    fn coord_mask(&self) -> u64 {
        (1u64 << self.dim()) - 1
    }

    /// Number of derivation generators in each term, if uniform.
    pub fn form_degree(&self, p: &SuperPoly) -> Option<u32> {
        let mask = self.theta_mask();
        let mut it = p.terms().keys().map(|m| m.degree_in(mask));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Projection to the component with `i` derivations and polynomial grade
    /// `j`, where coordinates count `+1` and derivations `−1`.
    pub fn bigrade_component(&self, p: &SuperPoly, i: u32, j: i64) -> SuperPoly {
        let tm = self.theta_mask();
        let cm = self.coord_mask();
        p.filter(|m| {
            let ti = m.degree_in(tm);
            ti == i && m.degree_in(cm) as i64 - ti as i64 == j
        })
    }

    /// All bigrades occurring in `p`, sorted.
    pub fn bigrades(&self, p: &SuperPoly) -> Vec<(u32, i64)> {
        let tm = self.theta_mask();
        let cm = self.coord_mask();
        let mut v: Vec<(u32, i64)> = p
            .terms()
            .keys()
            .map(|m| {
                let ti = m.degree_in(tm);
                (ti, m.degree_in(cm) as i64 - ti as i64)
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Exterior product; same as the supercommutative product.
    pub fn wedge(&self, p: &SuperPoly, q: &SuperPoly) -> Result<SuperPoly> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.mul(q))
    }

    fn check(&self, p: &SuperPoly) -> Result<()> {
        if same_table(p.table(), &self.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    /// Schouten bracket.
    pub fn schouten(&self, p: &SuperPoly, q: &SuperPoly) -> SuperPoly {
        let k = self.dim();
        let mut r = self.zero();
        for a in 0..k {
            let pt = p.partial_right(k + a);
            if !pt.is_zero() {
                let qz = q.partial_left(a);
                if !qz.is_zero() {
                    r.add_assign(&pt.mul(&qz));
                }
            }
            let pz = p.partial_right(a);
            if !pz.is_zero() {
                let qt = q.partial_left(k + a);
                if !qt.is_zero() {
                    r.add_scaled(&pz.mul(&qt), &-Q::one());
                }
            }
        }
        r
    }

    pub fn try_schouten(&self, p: &SuperPoly, q: &SuperPoly) -> Result<SuperPoly> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.schouten(p, q))
    }

    /// Bracket of two functions induced by a bivector.
    pub fn apply_bivector(&self, pi: &SuperPoly, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
        self.check(pi)?;
        self.check(f)?;
        self.check(g)?;
        if !pi.is_zero() && self.form_degree(pi) != Some(2) {
            return Err(Error::DegreeMismatch {
                expected: 2,
                found: format!("{:?}", self.form_degree(pi)),
            });
        }
        Ok(self.bracket(pi, f, g))
    }

    /// Unchecked variant of [`MvSpace::apply_bivector`] for homogeneous `f`.
    pub fn bracket(&self, pi: &SuperPoly, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
        let inner = self.schouten(&self.schouten(pi, f), g);
        match f.parity() {
            Some(Parity::Odd) => inner,
            Some(Parity::Even) => inner.neg(),
            None => {
                let even = f.filter(|m| m.parity() == Parity::Even);
                let odd = f.filter(|m| m.parity() == Parity::Odd);
                self.bracket(pi, &even, g).add(&self.bracket(pi, &odd, g))
            }
        }
    }

    /// Evaluates a trivector on three functions: `[[[[[[Θ,f]],g]],h]]`.
    pub fn eval_trivector(&self, theta: &SuperPoly, f: &SuperPoly, g: &SuperPoly, h: &SuperPoly) -> SuperPoly {
        self.schouten(&self.schouten(&self.schouten(theta, f), g), h)
    }

    /// Linear vector field `Σ_{i,j} m[i][j] z_i ∂z_j`, so that `∂z_j ↦ Σ_i m[i][j] z_i`.
    pub fn linear_vector_field(&self, m: &[Vec<Q>]) -> SuperPoly {
        let k = self.dim();
        let mut r = self.zero();
        for (i, row) in m.iter().enumerate().take(k) {
            for (j, c) in row.iter().enumerate().take(k) {
                if !num_traits::Zero::is_zero(c) {
                    r.add_scaled(&self.coord(i).mul(&self.theta(j)), c);
                }
            }
        }
        r
    }

    /// Component `X^a` of a vector field `X = Σ_a X^a θ_a`.
    pub fn vector_component(&self, x: &SuperPoly, a: usize) -> SuperPoly {
        x.partial_right(self.dim() + a)
    }

    /// Renders with derivations written `∂name`.
    pub fn render(&self, p: &SuperPoly) -> String {
        p.to_string()
    }
}
