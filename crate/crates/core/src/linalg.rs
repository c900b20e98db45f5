//! Exact rational linear algebra: dense matrices and sparse elimination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::superalgebra::{qi, Q};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
        RatMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn unit(n: usize, i: usize, j: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        m.data[i][j] = Q::one();
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> RatMatrix {
        let data: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        RatMatrix {
            rows: data.len(),
            cols: data.first().map_or(0, |r| r.len()),
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.data[i][j].is_zero()))
    }

    pub fn mul(&self, o: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, o.rows);
        let mut r = RatMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k][j];
                    if !b.is_zero() {
                        r.data[i][j] += a * b;
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &RatMatrix) -> RatMatrix {
        self.lin(o, &Q::one())
    }

    pub fn sub(&self, o: &RatMatrix) -> RatMatrix {
        self.lin(o, &-Q::one())
    }

    /// `self + s·o`.
    pub fn lin(&self, o: &RatMatrix, s: &Q) -> RatMatrix {
        let mut r = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !o.data[i][j].is_zero() {
                    r.data[i][j] += &o.data[i][j] * s;
                }
            }
        }
        r
    }

    pub fn scale(&self, s: &Q) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut r = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                r.data[j][i] = self.data[i][j].clone();
            }
        }
        r
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + &self.data[i][i])
    }

    pub fn commutator(&self, o: &RatMatrix) -> RatMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::SingularBody("non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = RatMatrix::identity(n).data;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::SingularBody(format!("no pivot in column {col}")))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Ok(RatMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Solves `self · x = b` for a square invertible matrix.
    pub fn solve(&self, b: &[Q]) -> Result<Vec<Q>> {
        let inv = self.inverse()?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(Q::zero(), |acc, j| acc + &inv.data[i][j] * &b[j]))
            .collect())
    }

    pub fn rank(&self) -> usize {
        let mut e = SparseEliminator::new(self.cols);
        for r in &self.data {
            e.push_dense(r);
        }
        e.rank()
    }

    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let rows: Vec<SparseRow> = self.data.iter().map(|r| SparseRow::from_dense(r)).collect();
        nullspace(&rows, self.cols)
    }
}

/// Sparse row: sorted column indices with nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseRow(pub BTreeMap<usize, Q>);

impl SparseRow {
    pub fn from_dense(r: &[Q]) -> SparseRow {
        SparseRow(
            r.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_entry(&mut self, col: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let e = self.0.entry(col).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.0.remove(&col);
        }
    }

    fn axpy(&mut self, s: &Q, o: &SparseRow) {
        for (c, v) in &o.0 {
            self.add_entry(*c, s * v);
        }
    }
}

/// Incremental row-echelon reduction over the rationals. Rows are reduced
/// against stored pivots as they arrive.
#[derive(Clone, Debug)]
pub struct SparseEliminator {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEliminator {
    pub fn new(cols: usize) -> SparseEliminator {
        SparseEliminator {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_dense(&mut self, r: &[Q]) -> bool {
        self.push(SparseRow::from_dense(r))
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        loop {
            let Some((&lead, lv)) = row.0.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let s = -(lv / &p.0[&lead]);
                    row.axpy(&s, p);
                }
                None => {
                    let inv = Q::one() / lv;
                    for v in row.0.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the solution space of the stored homogeneous system.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut rref: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let later: Vec<usize> = r.0.keys().copied().filter(|&k| k > c).collect();
            for k in later {
                if let Some(p) = rref.get(&k) {
                    if let Some(v) = r.0.get(&k).cloned() {
                        r.axpy(&-v, p);
                    }
                }
            }
            rref.insert(c, r);
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (&c, row) in &rref {
                    if let Some(x) = row.0.get(&f) {
                        v[c] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

pub fn nullspace(rows: &[SparseRow], cols: usize) -> Vec<Vec<Q>> {
    let mut e = SparseEliminator::new(cols);
    for r in rows {
        e.push(r.clone());
    }
    e.kernel()
}

/// Solves the affine system `A x = b` (rows of `A` sparse). Returns one
/// solution with free variables set to zero together with the kernel
/// dimension, or `None` if inconsistent.
pub fn solve_affine(rows: &[(SparseRow, Q)], cols: usize) -> Option<(Vec<Q>, usize)> {
    let mut e = SparseEliminator::new(cols + 1);
    for (r, b) in rows {
        let mut rr = r.clone();
        rr.add_entry(cols, -b.clone());
        e.push(rr);
    }
    if e.pivots.contains_key(&cols) {
        return None;
    }
    let ker = e.kernel();
    let sol = ker.iter().find(|v| !v[cols].is_zero())?;
    let s = sol[cols].clone();
    let x: Vec<Q> = sol[..cols].iter().map(|v| v / &s).collect();
    Some((x, ker.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(3));
    }

    #[test]
    fn rank_and_kernel() {
        let m = RatMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        for r in &m.data {
            let s = r.iter().zip(&k[0]).fold(Q::zero(), |a, (x, y)| a + x * y);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn affine_solve() {
        let rows = vec![
            (SparseRow::from_dense(&[qi(1), qi(1)]), qi(3)),
            (SparseRow::from_dense(&[qi(1), qi(-1)]), qi(1)),
        ];
        let (x, free) = solve_affine(&rows, 2).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
        assert_eq!(free, 0);
        let bad = vec![
            (SparseRow::from_dense(&[qi(1)]), qi(1)),
            (SparseRow::from_dense(&[qi(2)]), qi(1)),
        ];
        assert!(solve_affine(&bad, 1).is_none());
    }
}
