//! Differential forms with supercommutative polynomial coefficients.
//!
//! Forms on a linear supermanifold are polynomials in the coordinates `z_a`
//! and their differentials `dz_a`, where `dz_a` has parity opposite to `z_a`.
//! Differentials of even coordinates anticommute; those of odd coordinates
//! commute. The exterior derivative is `d = Σ_a dz_a ∂⃗/∂z_a`, an odd
//! derivation with `d² = 0`, and the contraction with a vector field
//! `X = Σ_a X^a ∂_a` is `ι_X = Σ_a X^a ∂⃗/∂(dz_a)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::moment::{CheckReport, MomentMap, MomentSetting};
use crate::multivector::MvSpace;
use crate::supermatrix::SuperMatrix;
use crate::superalgebra::{GeneratorTable, Parity, SuperPoly, Q};

pub type SuperForm = SuperPoly;

pub const DIFFERENTIAL_PREFIX: &str = "d";

#[derive(Debug, Clone)]
pub struct FormSpace {
    k: usize,
    table: Arc<GeneratorTable>,
}

impl FormSpace {
    pub fn new(coords: Vec<(String, Parity)>) -> Result<FormSpace> {
        let k = coords.len();
        let mut gens = coords.clone();
        for (n, p) in &coords {
            gens.push((format!("{DIFFERENTIAL_PREFIX}{n}"), p.flip()));
        }
        Ok(FormSpace {
            k,
            table: GeneratorTable::new(gens)?,
        })
    }

    /// Forms on the coordinates of a multivector space.
    pub fn for_space(space: &MvSpace) -> Result<FormSpace> {
        let coords = (0..space.dim())
            .map(|a| (space.coord_names()[a].clone(), space.coord_parity(a)))
            .collect();
        FormSpace::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn zero(&self) -> SuperForm {
        SuperPoly::zero(&self.table)
    }

    pub fn coord(&self, a: usize) -> SuperForm {
        SuperPoly::generator(&self.table, a)
    }

    pub fn dcoord(&self, a: usize) -> SuperForm {
        SuperPoly::generator(&self.table, self.k + a)
    }

    pub fn parse(&self, src: &str) -> Result<SuperForm> {
        SuperPoly::parse(&self.table, src)
    }

    /// Moves a function (no derivations or differentials) into the form algebra.
    pub fn lift(&self, f: &SuperPoly) -> Result<SuperForm> {
        let src = f.table();
        if src.len() < self.k || (0..self.k).any(|a| src.name(a) != self.table.name(a)) {
            return Err(Error::TableMismatch);
        }
        if f.terms().keys().any(|m| m.exponents()[self.k..].iter().any(|&e| e != 0)) {
            return Err(Error::Construction("expected a function of the coordinates".into()));
        }
        let mut out = self.zero();
        for (m, c) in f.terms() {
            let idx: Vec<usize> = m
                .exponents()
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            out.add_assign(&SuperPoly::product_of(&self.table, c.clone(), &idx));
        }
        Ok(out)
    }

    /// Number of differentials in each monomial, if homogeneous.
    pub fn form_degree(&self, w: &SuperForm) -> Option<u32> {
        let mut degs = w.terms().keys().map(|m| m.exponents()[self.k..].iter().map(|&e| e as u32).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Exterior derivative.
    pub fn d(&self, w: &SuperForm) -> SuperForm {
        let mut r = self.zero();
        for a in 0..self.k {
            let p = w.partial_left(a);
            if !p.is_zero() {
                r.add_assign(&self.dcoord(a).mul(&p));
            }
        }
        r
    }

    /// Components `X^a` of a vector field of the multivector space, lifted to forms.
    pub fn vector_components(&self, space: &MvSpace, x: &SuperPoly) -> Result<Vec<SuperForm>> {
        if space.dim() != self.k {
            return Err(Error::TableMismatch);
        }
        (0..self.k)
            .map(|a| self.lift(&space.vector_component(x, a)))
            .collect()
    }

    /// Contraction with a vector field given by its components.
    pub fn interior(&self, comps: &[SuperForm], w: &SuperForm) -> SuperForm {
        let mut r = self.zero();
        for (a, xa) in comps.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let p = w.partial_left(self.k + a);
            if !p.is_zero() {
                r.add_assign(&xa.mul(&p));
            }
        }
        r
    }

    /// Lie derivative obtained by transporting the derivation through the
    /// generators: `L_X z_a = (−1)^{|X|} X^a` and `L_X dz_a = d X^a`, where
    /// `|X|` is the parity of the derivation `X^a ∂_a`.
    pub fn lie_derivative(&self, comps: &[SuperForm], w: &SuperForm) -> SuperForm {
        let mut r = self.zero();
        for (a, xa) in comps.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let pz = w.partial_left(a);
            let pd = w.partial_left(self.k + a);
            for part in [Parity::Even, Parity::Odd] {
                let xp = xa.filter(|m| m.parity() == part);
                if xp.is_zero() {
                    continue;
                }
                if !pz.is_zero() {
                    let t = xp.mul(&pz);
                    match part.add(self.table.parity(a)) {
                        Parity::Even => r.add_assign(&t),
                        Parity::Odd => r = r.sub(&t),
                    }
                }
                if !pd.is_zero() {
                    r.add_assign(&self.d(&xp).mul(&pd));
                }
            }
        }
        r
    }

    /// Parity of the derivation `X = Σ X^a ∂_a`, if homogeneous.
    pub fn field_parity(&self, comps: &[SuperForm]) -> Option<Parity> {
        let mut out: Option<Parity> = None;
        for (a, xa) in comps.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let p = xa.parity()?.add(self.table.parity(a));
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or(Parity::Even))
    }

    /// `L_X − [d, ι_X]` with the graded commutator, for homogeneous `X`.
    pub fn cartan_residual(&self, comps: &[SuperForm], w: &SuperForm) -> Result<SuperForm> {
        let par = self
            .field_parity(comps)
            .ok_or_else(|| Error::ParityMismatch("vector field is not homogeneous".into()))?;
        let di = self.d(&self.interior(comps, w));
        let id = self.interior(comps, &self.d(w));
        let cartan = match par {
            Parity::Even => di.add(&id),
            Parity::Odd => di.sub(&id),
        };
        Ok(self.lie_derivative(comps, w).sub(&cartan))
    }

    /// `Φ⁻¹ dΦ` for a matrix of functions.
    pub fn maurer_cartan_pullback(&self, phi: &SuperMatrix, n: Option<u32>) -> Result<SuperMatrix> {
        let lifted = self.lift_matrix(phi)?;
        let inv = lifted.inverse(n)?;
        let dphi = lifted.map(|p| self.d(p));
        Ok(inv.mul_trunc(&dphi, n))
    }

    pub fn lift_matrix(&self, phi: &SuperMatrix) -> Result<SuperMatrix> {
        let entries = phi
            .entries
            .iter()
            .map(|r| r.iter().map(|p| self.lift(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix::from_entries(&self.table, entries).with_rep(&phi.rep))
    }

    /// `d(Φ⁻¹dΦ) + (Φ⁻¹dΦ)(Φ⁻¹dΦ)`, which vanishes.
    pub fn structure_residual(&self, phi: &SuperMatrix, n: Option<u32>) -> Result<SuperMatrix> {
        let w = self.maurer_cartan_pullback(phi, n)?;
        Ok(w.map(|p| self.d(p)).add(&w.mul_trunc(&w, n)).truncate(n.map(|n| n.saturating_sub(1))))
    }

    /// Matrix `M_ab = ∂⃗/∂(dz_a) ∂⃗/∂(dz_b) ω` of a 2-form.
    pub fn two_form_matrix(&self, w: &SuperForm) -> SuperMatrix {
        let entries = (0..self.k)
            .map(|a| {
                (0..self.k)
                    .map(|b| w.partial_left(self.k + b).partial_left(self.k + a))
                    .collect()
            })
            .collect();
        SuperMatrix::from_entries(&self.table, entries)
    }

    /// A 2-form is nondegenerate when its matrix has invertible body.
    pub fn is_nondegenerate(&self, w: &SuperForm) -> bool {
        self.form_degree(w) == Some(2) && self.two_form_matrix(w).body().inverse().is_ok()
    }
}

/// Residuals of `ι_{x_V} ω = factor · d⟨μ, x⟩` for every basis `x`.
pub fn contraction_residuals(
    s: &MomentSetting,
    fs: &FormSpace,
    omega: &SuperForm,
    mu: &MomentMap,
    factor: &Q,
) -> Result<Vec<SuperForm>> {
    (0..s.g.dim())
        .map(|x| {
            let comps = fs.vector_components(&s.space, &s.fields[x])?;
            let lhs = fs.interior(&comps, omega);
            let rhs = fs.d(&fs.lift(&mu.components[x])?).scale(factor);
            Ok(lhs.sub(&rhs))
        })
        .collect()
}

pub fn check_contraction(
    s: &MomentSetting,
    fs: &FormSpace,
    omega: &SuperForm,
    mu: &MomentMap,
    factor: &Q,
) -> Result<CheckReport> {
    let res = contraction_residuals(s, fs, omega, mu, factor)?;
    Ok(CheckReport::new("contraction", &res, s.compare_order()).with_detail(format!("factor = {factor}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed() -> FormSpace {
        FormSpace::new(vec![
            ("x".into(), Parity::Even),
            ("y".into(), Parity::Even),
            ("a".into(), Parity::Odd),
            ("b".into(), Parity::Odd),
        ])
        .unwrap()
    }

    #[test]
    fn d_of_constant() {
        let f = mixed();
        assert!(f.d(&f.parse("7").unwrap()).is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let f = mixed();
        let w = f.parse("x^2*a*b + y*da*b + x*a*dy + 3*b*db*x").unwrap();
        assert!(f.d(&f.d(&w)).is_zero());
    }

    #[test]
    fn differentials_commute_for_odd_coordinates() {
        let f = mixed();
        assert_eq!(f.dcoord(2).mul(&f.dcoord(3)), f.dcoord(3).mul(&f.dcoord(2)));
        assert_eq!(f.dcoord(0).mul(&f.dcoord(1)), f.dcoord(1).mul(&f.dcoord(0)).neg());
    }

    #[test]
    fn contraction_with_coordinate_field() {
        let f = mixed();
        let mut comps = vec![f.zero(); 4];
        comps[0] = f.parse("1").unwrap();
        let w = f.parse("dx*dy").unwrap();
        assert_eq!(f.interior(&comps, &w), f.parse("dy").unwrap());
    }

    #[test]
    fn cartan_formula_on_sample() {
        let f = mixed();
        let comps = vec![
            f.parse("y*a*b").unwrap(),
            f.parse("x").unwrap(),
            f.parse("x*b").unwrap(),
            f.parse("a").unwrap(),
        ];
        let w = f.parse("x*a*dy + da*db*y + x*y*dx").unwrap();
        assert!(f.cartan_residual(&comps, &w).unwrap().is_zero());
    }

    #[test]
    fn identity_pullback_vanishes() {
        let f = mixed();
        let id = SuperMatrix::identity(f.table(), 2);
        assert!(f.maurer_cartan_pullback(&id, Some(4)).unwrap().is_zero());
    }

    #[test]
    fn standard_symplectic_form() {
        let f = mixed();
        let w = f.parse("dx*dy + da*da + db*db").unwrap();
        assert!(f.is_nondegenerate(&w));
        assert!(!f.is_nondegenerate(&f.parse("dx*dy").unwrap()));
    }
}
