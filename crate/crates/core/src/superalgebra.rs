//! Supercommutative polynomials over the rationals.
//!
//! A [`GeneratorTable`] fixes an ordered list of named generators, each even or
//! odd. A [`SuperPoly`] is a finite linear combination of normal-form monomials:
//! generators appear in table order, even generators carry arbitrary exponents and
//! odd generators appear at most once. Reordering odd generators contributes the
//! Koszul sign.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Q = BigRational;

/// Rational from a numerator/denominator pair of machine integers.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u32) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

/// Ordered generator names with parities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    names: Vec<String>,
    parities: Vec<Parity>,
    index: HashMap<String, usize>,
    odd_mask: u64,
}

impl GeneratorTable {
    pub fn new(gens: Vec<(String, Parity)>) -> Result<Arc<GeneratorTable>> {
        if gens.len() > 64 {
            return Err(Error::Construction(format!(
                "generator table supports at most 64 generators, got {}",
                gens.len()
            )));
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(gens.len());
        let mut parities = Vec::with_capacity(gens.len());
        let mut odd_mask = 0u64;
        for (i, (n, p)) in gens.into_iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Construction(format!("duplicate generator name {n}")));
            }
            if p == Parity::Odd {
                odd_mask |= 1 << i;
            }
            names.push(n);
            parities.push(p);
        }
        Ok(Arc::new(GeneratorTable {
            names,
            parities,
            index,
            odd_mask,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd_mask
    }
}

/// Normal-form monomial: one exponent per generator, odd exponents in {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Box<[u16]>,
    odd: u64,
}

impl Monomial {
    pub fn unit(n: usize) -> Monomial {
        Monomial {
            exps: vec![0; n].into_boxed_slice(),
            odd: 0,
        }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn odd_bits(&self) -> u64 {
        self.odd
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Degree counted only over generators selected by `mask`.
    pub fn degree_in(&self, mask: u64) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e as u32)
            .sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn from_exps(exps: Vec<u16>, odd_mask: u64) -> Monomial {
        let mut odd = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 && odd_mask >> i & 1 == 1 {
                odd |= 1 << i;
            }
        }
        Monomial {
            exps: exps.into_boxed_slice(),
            odd,
        }
    }

    /// Product of two monomials with its Koszul sign, or `None` if an odd
    /// generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut negative = false;
        let mut rest = other.odd;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let above = if j >= 63 { 0 } else { self.odd >> (j + 1) };
            if above.count_ones() % 2 == 1 {
                negative = !negative;
            }
        }
        let exps: Vec<u16> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Some((
            Monomial {
                exps: exps.into_boxed_slice(),
                odd: self.odd | other.odd,
            },
            negative,
        ))
    }
}

/// Supercommutative polynomial in normal form.
#[derive(Clone, Debug)]
pub struct SuperPoly {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for SuperPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for SuperPoly {}

pub(crate) fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(feature = "parallel")]
const PAR_MUL_THRESHOLD: usize = 1 << 14;

impl SuperPoly {
    pub fn zero(table: &Arc<GeneratorTable>) -> SuperPoly {
        SuperPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Q) -> SuperPoly {
        let mut p = SuperPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(table.len()), c);
        }
        p
    }

    pub fn one(table: &Arc<GeneratorTable>) -> SuperPoly {
        SuperPoly::constant(table, Q::one())
    }

    pub fn generator(table: &Arc<GeneratorTable>, i: usize) -> SuperPoly {
        let mut exps = vec![0u16; table.len()];
        exps[i] = 1;
        let m = Monomial::from_exps(exps, table.odd_mask());
        let mut p = SuperPoly::zero(table);
        p.terms.insert(m, Q::one());
        p
    }

    pub fn gen(table: &Arc<GeneratorTable>, name: &str) -> Result<SuperPoly> {
        Ok(SuperPoly::generator(table, table.index_of(name)?))
    }

    /// Monomial with coefficient `c` given as a list of generator indices in
    /// the written order; the Koszul sign of sorting is applied.
    pub fn product_of(table: &Arc<GeneratorTable>, c: Q, idx: &[usize]) -> SuperPoly {
        let mut p = SuperPoly::constant(table, c);
        for &i in idx {
            p = p.mul(&SuperPoly::generator(table, i));
        }
        p
    }

    pub fn from_terms(table: &Arc<GeneratorTable>, terms: BTreeMap<Monomial, Q>) -> SuperPoly {
        let mut p = SuperPoly::zero(table);
        for (m, c) in terms {
            if !c.is_zero() {
                p.terms.insert(m, c);
            }
        }
        p
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_table(&self, other: &SuperPoly) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    fn add_term(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        debug_assert!(same_table(&self.table, &other.table));
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            SuperPoly::add_term(&mut terms, m.clone(), c.clone());
        }
        SuperPoly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn add_assign(&mut self, other: &SuperPoly) {
        debug_assert!(same_table(&self.table, &other.table));
        for (m, c) in &other.terms {
            SuperPoly::add_term(&mut self.terms, m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &SuperPoly, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            SuperPoly::add_term(&mut self.terms, m.clone(), c * s);
        }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        let mut r = self.clone();
        r.add_scaled(other, &-Q::one());
        r
    }

    pub fn neg(&self) -> SuperPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> SuperPoly {
        if s.is_zero() {
            return SuperPoly::zero(&self.table);
        }
        SuperPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    fn mul_into(
        acc: &mut BTreeMap<Monomial, Q>,
        a: &[(&Monomial, &Q)],
        b: &BTreeMap<Monomial, Q>,
        trunc: Option<u32>,
    ) {
        for (m1, c1) in a {
            let d1 = m1.degree();
            for (m2, c2) in b {
                if let Some(n) = trunc {
                    if d1 + m2.degree() > n {
                        continue;
                    }
                }
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = *c1 * c2;
                    SuperPoly::add_term(acc, m, if neg { -c } else { c });
                }
            }
        }
    }

    fn mul_impl(&self, other: &SuperPoly, trunc: Option<u32>) -> SuperPoly {
        debug_assert!(same_table(&self.table, &other.table));
        let a: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        #[cfg(feature = "parallel")]
        {
            if a.len() * other.terms.len() >= PAR_MUL_THRESHOLD && a.len() > 1 {
                use rayon::prelude::*;
                let chunk = (a.len() / rayon::current_num_threads().max(1)).max(1);
                let parts: Vec<BTreeMap<Monomial, Q>> = a
                    .par_chunks(chunk)
                    .map(|ch| {
                        let mut acc = BTreeMap::new();
                        SuperPoly::mul_into(&mut acc, ch, &other.terms, trunc);
                        acc
                    })
                    .collect();
                let mut terms = BTreeMap::new();
                for part in parts {
                    for (m, c) in part {
                        SuperPoly::add_term(&mut terms, m, c);
                    }
                }
                return SuperPoly {
                    table: self.table.clone(),
                    terms,
                };
            }
        }
        let mut terms = BTreeMap::new();
        SuperPoly::mul_into(&mut terms, &a, &other.terms, trunc);
        SuperPoly {
            table: self.table.clone(),
            terms,
        }
    }

    /// Supercommutative product.
    pub fn mul(&self, other: &SuperPoly) -> SuperPoly {
        self.mul_impl(other, None)
    }

    /// Product with all monomials of total degree above `n` discarded.
    pub fn mul_trunc(&self, other: &SuperPoly, n: Option<u32>) -> SuperPoly {
        self.mul_impl(other, n)
    }

    /// Single-threaded product, used as the reference path in benches and tests.
    pub fn mul_sequential(&self, other: &SuperPoly) -> SuperPoly {
        let a: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        let mut terms = BTreeMap::new();
        SuperPoly::mul_into(&mut terms, &a, &other.terms, None);
        SuperPoly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn try_mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check_table(other)?;
        Ok(self.mul(other))
    }

    pub fn pow(&self, k: u32) -> SuperPoly {
        let mut r = SuperPoly::one(&self.table);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn truncate(&self, n: u32) -> SuperPoly {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Parity of a homogeneous element; `None` when mixed. Zero is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => {
                if it.all(|q| q == p) {
                    Some(p)
                } else {
                    None
                }
            }
        }
    }

    /// Total degree of a homogeneous element; `None` when mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Component of total degree `d`.
    pub fn degree_part(&self, d: u32) -> SuperPoly {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Constant term.
    pub fn body(&self) -> Q {
        self.terms
            .get(&Monomial::unit(self.table.len()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    /// Restricts to monomials whose exponents satisfy `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPoly {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Left partial derivative: generator `j` is moved to the front and removed.
    pub fn partial_left(&self, j: usize) -> SuperPoly {
        self.partial(j, true)
    }

    /// Right partial derivative: generator `j` is moved to the back and removed.
    pub fn partial_right(&self, j: usize) -> SuperPoly {
        self.partial(j, false)
    }

    fn partial(&self, j: usize, left: bool) -> SuperPoly {
        let odd_j = self.table.parity(j) == Parity::Odd;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps[j];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.to_vec();
            exps[j] -= 1;
            let coeff = if odd_j {
                let others = if left {
                    m.odd & ((1u64 << j) - 1)
                } else if j >= 63 {
                    0
                } else {
                    m.odd >> (j + 1)
                };
                if others.count_ones() % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            } else {
                c * qi(e as i64)
            };
            let mm = Monomial::from_exps(exps, self.table.odd_mask());
            SuperPoly::add_term(&mut terms, mm, coeff);
        }
        SuperPoly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn partial_by_name(&self, name: &str) -> Result<SuperPoly> {
        Ok(self.partial_left(self.table.index_of(name)?))
    }

    /// Algebra homomorphism determined by images of generators; `None` keeps
    /// the generator. Images must lie over `target` and share the source parity.
    pub fn substitute(
        &self,
        images: &[Option<SuperPoly>],
        target: &Arc<GeneratorTable>,
    ) -> Result<SuperPoly> {
        if images.len() != self.table.len() {
            return Err(Error::Construction(format!(
                "substitution needs {} images, got {}",
                self.table.len(),
                images.len()
            )));
        }
        let mut resolved = Vec::with_capacity(images.len());
        for (i, im) in images.iter().enumerate() {
            let p = match im {
                Some(p) => {
                    if !same_table(p.table(), target) {
                        return Err(Error::TableMismatch);
                    }
                    match p.parity() {
                        Some(par) if par == self.table.parity(i) || p.is_zero() => {}
                        _ => {
                            return Err(Error::ParityMismatch(self.table.name(i).to_string()))
                        }
                    }
                    p.clone()
                }
                None => {
                    if !same_table(&self.table, target) {
                        return Err(Error::TableMismatch);
                    }
                    SuperPoly::generator(target, i)
                }
            };
            resolved.push(p);
        }
        let mut out = SuperPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = SuperPoly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&resolved[i]);
                }
            }
            out.add_assign(&term);
        }
        Ok(out)
    }

    /// Re-expresses this polynomial over a larger table whose first generators
    /// coincide with this table.
    pub fn embed(&self, target: &Arc<GeneratorTable>, offset: usize) -> SuperPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[i + offset] = e;
            }
            terms.insert(Monomial::from_exps(exps, target.odd_mask()), c.clone());
        }
        SuperPoly {
            table: target.clone(),
            terms,
        }
    }

    /// Maps generators through an index map into another table; sign-correct
    /// because it is implemented as a substitution.
    pub fn relabel(&self, target: &Arc<GeneratorTable>, map: &[usize]) -> Result<SuperPoly> {
        let images: Vec<Option<SuperPoly>> = map
            .iter()
            .map(|&j| Some(SuperPoly::generator(target, j)))
            .collect();
        self.substitute(&images, target)
    }

    /// Parses a polynomial such as `1/2*xi2*xim2 - xi0 + 3*v1^2`.
    pub fn parse(table: &Arc<GeneratorTable>, src: &str) -> Result<SuperPoly> {
        parse_poly(table, src)
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 1 {
                    factors.push(self.table.name(i).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.table.name(i), e));
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_poly(table: &Arc<GeneratorTable>, src: &str) -> Result<SuperPoly> {
    let chars: Vec<char> = src.chars().collect();
    let mut pos = 0usize;
    let mut out = SuperPoly::zero(table);
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let err = |msg: &str, at: usize| Error::Parse(format!("{msg} at offset {at} in '{src}'"));
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(err("empty expression", pos));
    }
    if src.trim() == "0" {
        return Ok(out);
    }
    let mut first = true;
    while pos < chars.len() {
        skip_ws(&mut pos);
        let mut sign = Q::one();
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err("expected '+' or '-'", pos));
        }
        first = false;
        let mut term = SuperPoly::constant(table, sign);
        let mut expect_factor = true;
        while pos < chars.len() && expect_factor {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                return Err(err("dangling factor", pos));
            }
            let c = chars[pos];
            if c.is_ascii_digit() {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let num: BigInt = chars[start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad integer", start))?;
                let mut val = BigRational::from_integer(num);
                if pos < chars.len() && chars[pos] == '/' {
                    pos += 1;
                    let s2 = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if s2 == pos {
                        return Err(err("bad denominator", s2));
                    }
                    let den: BigInt = chars[s2..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err("bad denominator", s2))?;
                    if den.is_zero() {
                        return Err(err("zero denominator", s2));
                    }
                    val /= BigRational::from_integer(den);
                }
                term = term.scale(&val);
            } else if c.is_alphabetic() || c == '_' || c == '∂' {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_alphanumeric() || chars[pos] == '_' || chars[pos] == '∂' || chars[pos] == '\'')
                {
                    pos += 1;
                }
                let name: String = chars[start..pos].iter().collect();
                let g = SuperPoly::gen(table, &name)?;
                let mut exp = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let s2 = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exp = chars[s2..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err("bad exponent", s2))?;
                }
                term = term.mul(&g.pow(exp));
            } else {
                return Err(err("unexpected character", pos));
            }
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                expect_factor = true;
            } else {
                expect_factor = false;
            }
        }
        out.add_assign(&term);
        skip_ws(&mut pos);
    }
    Ok(out)
}
