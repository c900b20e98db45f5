//! Square roots, inverses and Gauss factorisation of supermatrices.
//!
//! `gauss_factorize` writes `Φ = N₊ D N₋` with `N₊` upper unipotent, `D`
//! diagonal and `N₋` lower unipotent, then returns `L₊ = N₊ D^{1/2}` and
//! `L₋ = N₋⁻¹ D^{−1/2}`, so that `Φ = L₊ L₋⁻¹` and the diagonals of `L₊` and
//! `L₋` are mutually inverse.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::supermatrix::{agree_to_order, SuperMatrix, SERIES_LIMIT};
use crate::superalgebra::{qi, SuperPoly, Q};

/// Element of the dual group in its triangular presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GStarElement {
    pub l_plus: SuperMatrix,
    pub l_minus: SuperMatrix,
}

impl GStarElement {
    /// Checks triangularity and the diagonal constraint, to order `n`.
    pub fn validate(&self, n: Option<u32>) -> Result<()> {
        if !self.l_plus.is_upper_triangular() || !self.l_minus.is_lower_triangular() {
            return Err(Error::Construction("L± are not triangular".into()));
        }
        let prod = self
            .l_plus
            .diagonal()
            .mul_trunc(&self.l_minus.diagonal(), n);
        let id = SuperMatrix::identity(&self.l_plus.table, self.l_plus.n());
        if !agree_to_order(&prod, &id, n) {
            return Err(Error::Construction("diag(L+)·diag(L-) is not the identity".into()));
        }
        Ok(())
    }

    /// `L₊ L₋⁻¹`.
    pub fn product(&self, n: Option<u32>) -> Result<SuperMatrix> {
        Ok(self.l_plus.mul_trunc(&self.l_minus.inverse(n)?, n))
    }
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Generalised binomial coefficient `(α choose k)`.
fn binom(alpha: &Q, k: usize) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * (alpha - qi(i as i64)) / qi((i + 1) as i64);
    }
    r
}

/// `a^α` for a polynomial whose body is a positive rational with a rational
/// `α`-th power (`α = ±1/2` or an integer), as a binomial series.
fn power_series(a: &SuperPoly, alpha: &Q, body_pow: Q, n: Option<u32>) -> Result<SuperPoly> {
    let b = a.body();
    let t = a.table().clone();
    let rest = a.sub(&SuperPoly::constant(&t, b.clone())).scale(&(Q::one() / &b));
    let mut sum = SuperPoly::one(&t);
    let mut pw = SuperPoly::one(&t);
    for k in 1..=SERIES_LIMIT {
        pw = pw.mul_trunc(&rest, n);
        if pw.is_zero() {
            return Ok(sum.scale(&body_pow));
        }
        sum.add_scaled(&pw, &binom(alpha, k));
    }
    Err(Error::NonTerminating("binomial series; supply a truncation order".into()))
}

/// Square root of a polynomial whose body is a positive rational square.
pub fn super_sqrt(a: &SuperPoly, n: Option<u32>) -> Result<SuperPoly> {
    let b = a.body();
    let r = rational_sqrt(&b)
        .filter(|r| !r.is_zero())
        .ok_or_else(|| Error::SingularBody(format!("body {b} has no positive rational square root")))?;
    power_series(a, &(Q::one() / qi(2)), r, n)
}

/// Inverse square root, same admissibility as [`super_sqrt`].
pub fn super_inv_sqrt(a: &SuperPoly, n: Option<u32>) -> Result<SuperPoly> {
    let b = a.body();
    let r = rational_sqrt(&b)
        .filter(|r| !r.is_zero())
        .ok_or_else(|| Error::SingularBody(format!("body {b} has no positive rational square root")))?;
    power_series(a, &(-Q::one() / qi(2)), Q::one() / r, n)
}

/// Multiplicative inverse of a polynomial with nonzero body.
pub fn poly_inverse(a: &SuperPoly, n: Option<u32>) -> Result<SuperPoly> {
    let b = a.body();
    if b.is_zero() {
        return Err(Error::SingularBody("zero body".into()));
    }
    power_series(a, &-Q::one(), Q::one() / b, n)
}

pub fn super_inverse(a: &SuperMatrix, n: Option<u32>) -> Result<SuperMatrix> {
    a.inverse(n)
}

/// Upper-unipotent · diagonal · lower-unipotent decomposition.
pub fn udl(phi: &SuperMatrix, n: Option<u32>) -> Result<(SuperMatrix, SuperMatrix, SuperMatrix)> {
    let k = phi.n();
    let t = phi.table.clone();
    let mut work = phi.truncate(n);
    let mut up = SuperMatrix::identity(&t, k);
    let mut lo = SuperMatrix::identity(&t, k);
    let mut d = SuperMatrix::zero(&t, k);
    for p in (0..k).rev() {
        let piv = work.entries[p][p].clone();
        if piv.body().is_zero() {
            return Err(Error::SingularBody(format!("pivot {p} has zero body")));
        }
        let inv = poly_inverse(&piv, n)?;
        for i in 0..p {
            up.entries[i][p] = work.entries[i][p].mul_trunc(&inv, n);
        }
        for j in 0..p {
            lo.entries[p][j] = inv.mul_trunc(&work.entries[p][j], n);
        }
        for i in 0..p {
            for j in 0..p {
                let corr = up.entries[i][p].mul_trunc(&piv, n).mul_trunc(&lo.entries[p][j], n);
                work.entries[i][j] = work.entries[i][j].sub(&corr);
            }
        }
        d.entries[p][p] = piv;
    }
    Ok((up, d, lo))
}

/// Factorises `Φ = L₊ L₋⁻¹`.
pub fn gauss_factorize(phi: &SuperMatrix, n: Option<u32>) -> Result<GStarElement> {
    let (up, d, lo) = udl(phi, n)?;
    let k = phi.n();
    let t = phi.table.clone();
    let mut dsq = SuperMatrix::zero(&t, k);
    let mut dinvsq = SuperMatrix::zero(&t, k);
    for i in 0..k {
        dsq.entries[i][i] = super_sqrt(&d.entries[i][i], n)?;
        dinvsq.entries[i][i] = super_inv_sqrt(&d.entries[i][i], n)?;
    }
    let l_plus = up.mul_trunc(&dsq, n).with_rep(&phi.rep);
    let l_minus = lo.inverse(n)?.mul_trunc(&dinvsq, n).with_rep(&phi.rep);
    Ok(GStarElement { l_plus, l_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::{q, GeneratorTable, Parity};
    use std::sync::Arc;

    fn odd3() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![
            ("xi2".into(), Parity::Odd),
            ("xi0".into(), Parity::Odd),
            ("xim2".into(), Parity::Odd),
        ])
        .unwrap()
    }

    #[test]
    fn sqrt_of_one() {
        let t = odd3();
        assert_eq!(super_sqrt(&SuperPoly::one(&t), None).unwrap(), SuperPoly::one(&t));
    }

    #[test]
    fn odd_sqrt_terminates() {
        let t = odd3();
        let a = SuperPoly::parse(&t, "1 + 1/2*xi2*xim2").unwrap();
        let s = super_sqrt(&a, None).unwrap();
        assert_eq!(s, SuperPoly::parse(&t, "1 + 1/4*xi2*xim2").unwrap());
        assert_eq!(s.mul(&s), a);
    }

    #[test]
    fn even_sqrt_to_order() {
        let t = GeneratorTable::new(vec![("v1".into(), Parity::Even), ("vm1".into(), Parity::Even)]).unwrap();
        let a = SuperPoly::parse(&t, "1 + 1/4*v1*vm1").unwrap();
        let s = super_sqrt(&a, Some(8)).unwrap();
        assert_eq!(s.mul_trunc(&s, Some(8)), a);
        assert!(super_sqrt(&a, None).is_err());
    }

    #[test]
    fn non_square_body_rejected() {
        let t = odd3();
        assert!(super_sqrt(&SuperPoly::constant(&t, qi(2)), None).is_err());
        assert!(super_sqrt(&SuperPoly::constant(&t, q(9, 4)), None).is_ok());
    }

    #[test]
    fn identity_factorization() {
        let t = odd3();
        let id = SuperMatrix::identity(&t, 2);
        let g = gauss_factorize(&id, None).unwrap();
        assert_eq!(g.l_plus, id);
        assert_eq!(g.l_minus, id);
    }
}
