//! Square matrices with supercommutative polynomial entries.
//!
//! Arithmetic optionally discards all monomials above a total degree `N`;
//! this is how non-terminating series over even generators are handled.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::superalgebra::{qi, GeneratorTable, SuperPoly, Q};

/// Maximal number of series terms tried before a series is declared
/// non-terminating.
pub const SERIES_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub table: Arc<GeneratorTable>,
    pub entries: Vec<Vec<SuperPoly>>,
    /// Label of the module the matrix acts on.
    pub rep: String,
}

impl SuperMatrix {
    pub fn zero(table: &Arc<GeneratorTable>, n: usize) -> SuperMatrix {
        SuperMatrix {
            table: table.clone(),
            entries: vec![vec![SuperPoly::zero(table); n]; n],
            rep: String::new(),
        }
    }

    pub fn identity(table: &Arc<GeneratorTable>, n: usize) -> SuperMatrix {
        SuperMatrix::from_rational(table, &RatMatrix::identity(n))
    }

    pub fn from_rational(table: &Arc<GeneratorTable>, m: &RatMatrix) -> SuperMatrix {
        SuperMatrix {
            table: table.clone(),
            entries: m
                .data
                .iter()
                .map(|r| r.iter().map(|c| SuperPoly::constant(table, c.clone())).collect())
                .collect(),
            rep: String::new(),
        }
    }

    pub fn from_entries(table: &Arc<GeneratorTable>, entries: Vec<Vec<SuperPoly>>) -> SuperMatrix {
        SuperMatrix {
            table: table.clone(),
            entries,
            rep: String::new(),
        }
    }

    /// Parses rows of polynomial strings.
    pub fn parse(table: &Arc<GeneratorTable>, rows: &[&[&str]]) -> Result<SuperMatrix> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| SuperPoly::parse(table, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix::from_entries(table, entries))
    }

    pub fn with_rep(mut self, rep: &str) -> SuperMatrix {
        self.rep = rep.to_string();
        self
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &SuperPoly {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|p| p.is_zero()))
    }

    pub fn map(&self, f: impl Fn(&SuperPoly) -> SuperPoly) -> SuperMatrix {
        SuperMatrix {
            table: self.table.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
            rep: self.rep.clone(),
        }
    }

    pub fn add(&self, o: &SuperMatrix) -> SuperMatrix {
        let mut r = self.clone();
        for i in 0..self.n() {
            for j in 0..self.n() {
                r.entries[i][j].add_assign(&o.entries[i][j]);
            }
        }
        r
    }

    pub fn sub(&self, o: &SuperMatrix) -> SuperMatrix {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> SuperMatrix {
        self.map(|p| p.scale(s))
    }

    /// Left multiplication of every entry by a polynomial.
    pub fn scale_poly(&self, p: &SuperPoly) -> SuperMatrix {
        self.map(|e| p.mul(e))
    }

    pub fn truncate(&self, n: Option<u32>) -> SuperMatrix {
        match n {
            None => self.clone(),
            Some(n) => self.map(|p| p.truncate(n)),
        }
    }

    pub fn mul_trunc(&self, o: &SuperMatrix, n: Option<u32>) -> SuperMatrix {
        let k = self.n();
        let mut r = SuperMatrix::zero(&self.table, k);
        r.rep = self.rep.clone();
        for i in 0..k {
            for j in 0..k {
                let mut acc = SuperPoly::zero(&self.table);
                for l in 0..k {
                    let (a, b) = (&self.entries[i][l], &o.entries[l][j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul_trunc(b, n));
                    }
                }
                r.entries[i][j] = acc;
            }
        }
        r
    }

    pub fn mul(&self, o: &SuperMatrix) -> SuperMatrix {
        self.mul_trunc(o, None)
    }

    pub fn trace(&self) -> SuperPoly {
        let mut s = SuperPoly::zero(&self.table);
        for i in 0..self.n() {
            s.add_assign(&self.entries[i][i]);
        }
        s
    }

    /// Degree-zero part.
    pub fn body(&self) -> RatMatrix {
        let n = self.n();
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i][j] = self.entries[i][j].body();
            }
        }
        m
    }

    pub fn max_degree(&self) -> u32 {
        self.entries
            .iter()
            .flat_map(|r| r.iter().filter_map(|p| p.max_degree()))
            .max()
            .unwrap_or(0)
    }

    /// Entrywise right partial derivative.
    pub fn partial_right(&self, g: usize) -> SuperMatrix {
        self.map(|p| p.partial_right(g))
    }

    /// Entrywise left partial derivative.
    pub fn partial_left(&self, g: usize) -> SuperMatrix {
        self.map(|p| p.partial_left(g))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n()).all(|i| (0..i).all(|j| self.entries[i][j].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n()).all(|i| (i + 1..self.n()).all(|j| self.entries[i][j].is_zero()))
    }

    pub fn diagonal(&self) -> SuperMatrix {
        let mut r = SuperMatrix::zero(&self.table, self.n());
        for i in 0..self.n() {
            r.entries[i][i] = self.entries[i][i].clone();
        }
        r
    }

    /// Inverse through the body inverse and a geometric series in the
    /// nilpotent remainder, truncated at degree `n` when given.
    pub fn inverse(&self, n: Option<u32>) -> Result<SuperMatrix> {
        let k = self.n();
        let b0 = self.body().inverse()?;
        let b0m = SuperMatrix::from_rational(&self.table, &b0);
        let id = SuperMatrix::identity(&self.table, k);
        let nil = id.sub(&b0m.mul_trunc(self, n));
        let mut term = id.clone();
        let mut sum = id;
        for _ in 0..SERIES_LIMIT {
            term = term.mul_trunc(&nil, n);
            if term.is_zero() {
                let mut r = sum.mul_trunc(&b0m, n);
                r.rep = self.rep.clone();
                return Ok(r);
            }
            sum = sum.add(&term);
        }
        Err(Error::NonTerminating(
            "inverse series; supply a truncation order".into(),
        ))
    }

    /// Exponential series; returns the matrix and the highest power that
    /// contributed.
    pub fn exp(&self, n: Option<u32>) -> Result<(SuperMatrix, usize)> {
        let k = self.n();
        let id = SuperMatrix::identity(&self.table, k);
        let mut term = id.clone();
        let mut sum = id;
        let mut last = 0;
        for p in 1..=SERIES_LIMIT {
            term = term.mul_trunc(self, n).scale(&(Q::one() / qi(p as i64)));
            if term.is_zero() {
                let mut r = sum;
                r.rep = self.rep.clone();
                return Ok((r, last));
            }
            last = p;
            sum = sum.add(&term);
        }
        Err(Error::NonTerminating(
            "exponential series; supply a truncation order".into(),
        ))
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// True if every entry of `a − b` vanishes up to degree `n` (all degrees when
/// `n` is `None`).
pub fn agree_to_order(a: &SuperMatrix, b: &SuperMatrix, n: Option<u32>) -> bool {
    let d = a.sub(b);
    match n {
        None => d.is_zero(),
        Some(n) => d.truncate(Some(n)).is_zero(),
    }
}

pub fn is_zero_to_order(p: &SuperPoly, n: Option<u32>) -> bool {
    match n {
        None => p.is_zero(),
        Some(n) => p.truncate(n).is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::Parity;

    fn odd3() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![
            ("xi2".into(), Parity::Odd),
            ("xi0".into(), Parity::Odd),
            ("xim2".into(), Parity::Odd),
        ])
        .unwrap()
    }

    #[test]
    fn identity_inverse() {
        let t = odd3();
        let i = SuperMatrix::identity(&t, 2);
        assert_eq!(i.inverse(None).unwrap(), i);
    }

    #[test]
    fn geometric_series() {
        let t = odd3();
        let m = SuperMatrix::parse(&t, &[&["1 + xi2*xim2", "0"], &["0", "1"]]).unwrap();
        let inv = m.inverse(None).unwrap();
        assert_eq!(inv.entries[0][0], SuperPoly::parse(&t, "1 - xi2*xim2").unwrap());
        assert_eq!(m.mul(&inv), SuperMatrix::identity(&t, 2));
    }

    #[test]
    fn even_inverse_needs_truncation() {
        let t = GeneratorTable::new(vec![("a".into(), Parity::Even)]).unwrap();
        let m = SuperMatrix::parse(&t, &[&["1 + a"]]).unwrap();
        assert!(m.inverse(None).is_err());
        let inv = m.inverse(Some(5)).unwrap();
        assert!(agree_to_order(&m.mul_trunc(&inv, Some(5)), &SuperMatrix::identity(&t, 1), Some(5)));
    }
}
