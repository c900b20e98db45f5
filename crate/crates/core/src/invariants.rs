//! Dimensions of invariant subspaces and of `Hom_g(A, B)`.
//!
//! An invariant vector has weight zero and is annihilated by all positive root
//! vectors; conversely a weight-zero vector killed by the positive root vectors
//! is a highest weight vector of weight zero and spans a trivial summand. The
//! solver therefore restricts to the weight-zero basis vectors and computes
//! the rank of the stacked positive-root actions by exact sparse elimination.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::liealg::{materialize, LieAlgebra, ModuleExpr, SparseRep, DIM_BOUND};
use crate::linalg::{SparseEliminator, SparseRow};
use crate::superalgebra::{Parity, Q};
use crate::{par_map, ExecMode};

pub type TensorModuleExpr = ModuleExpr;

/// Cap for a top-level tensor product, whose factors are materialized
/// separately and combined only on weight-matched pairs.
pub const LAZY_DIM_BOUND: usize = 2_000_000;

/// Result of an invariant computation.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InvariantReport {
    pub expr: String,
    pub dim: usize,
    pub zero_weight_dim: usize,
    pub invariants: usize,
}

pub fn invariant_dimension(g: &LieAlgebra, m: &ModuleExpr) -> Result<usize> {
    Ok(invariant_report(g, m, ExecMode::default())?.invariants)
}

pub fn invariant_dimension_with(g: &LieAlgebra, m: &ModuleExpr, mode: ExecMode) -> Result<usize> {
    Ok(invariant_report(g, m, mode)?.invariants)
}

/// `dim Hom_g(A, B) = dim (A* ⊗ B)^g`.
pub fn hom_dimension(g: &LieAlgebra, a: &ModuleExpr, b: &ModuleExpr) -> Result<usize> {
    invariant_dimension(g, &hom_expr(a, b))
}

pub fn hom_expr(a: &ModuleExpr, b: &ModuleExpr) -> ModuleExpr {
    ModuleExpr::Tensor(vec![ModuleExpr::Dual(Box::new(a.clone())), b.clone()])
}

pub fn invariant_report(g: &LieAlgebra, m: &ModuleExpr, mode: ExecMode) -> Result<InvariantReport> {
    let dim = m.dim(g)?;
    let bound = match m {
        ModuleExpr::Tensor(parts) if parts.len() >= 2 => LAZY_DIM_BOUND,
        _ => DIM_BOUND,
    };
    if dim > bound {
        return Err(Error::DimensionBound { dim, bound });
    }
    let elems = g.positive.clone();
    let (zero, images): (usize, Vec<SparseRow>) = match m {
        ModuleExpr::Tensor(parts) if parts.len() >= 2 => {
            let left = if parts.len() == 2 {
                parts[0].clone()
            } else {
                ModuleExpr::Tensor(parts[..parts.len() - 1].to_vec())
            };
            let a = materialize(g, &left, &elems)?;
            let b = materialize(g, &parts[parts.len() - 1], &elems)?;
            lazy_tensor_images(&a, &b, mode)
        }
        _ => {
            let r = materialize(g, m, &elems)?;
            full_images(&r, mode)
        }
    };
    let mut elim = SparseEliminator::new(usize::MAX);
    for row in images {
        elim.push(row);
    }
    Ok(InvariantReport {
        expr: m.to_string(),
        dim,
        zero_weight_dim: zero,
        invariants: zero - elim.rank(),
    })
}

fn is_zero_weight(w: &[Q]) -> bool {
    w.iter().all(num_traits::Zero::is_zero)
}

fn full_images(r: &SparseRep, mode: ExecMode) -> (usize, Vec<SparseRow>) {
    let zero: Vec<usize> = (0..r.dim).filter(|&i| is_zero_weight(&r.weights[i])).collect();
    let rows = par_map(mode, &zero, |&c| {
        let mut row = SparseRow::default();
        for (k, m) in r.actions.iter().enumerate() {
            for (i, v) in &m[c] {
                row.add_entry(k * r.dim + i, v.clone());
            }
        }
        row
    });
    (zero.len(), rows)
}

fn lazy_tensor_images(a: &SparseRep, b: &SparseRep, mode: ExecMode) -> (usize, Vec<SparseRow>) {
    let mut by_weight: HashMap<Vec<Q>, Vec<usize>> = HashMap::new();
    for (j, w) in b.weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(j);
    }
    let mut pairs = Vec::new();
    for (i, w) in a.weights.iter().enumerate() {
        let neg: Vec<Q> = w.iter().map(|x| -x.clone()).collect();
        if let Some(js) = by_weight.get(&neg) {
            for &j in js {
                pairs.push((i, j));
            }
        }
    }
    let dim = a.dim * b.dim;
    let rows = par_map(mode, &pairs, |&(i, j)| {
        let mut row = SparseRow::default();
        for k in 0..a.actions.len() {
            let base = k * dim;
            for (r, v) in &a.actions[k][i] {
                row.add_entry(base + r * b.dim + j, v.clone());
            }
            for (s, v) in &b.actions[k][j] {
                row.add_entry(base + i * b.dim + s, v.clone());
            }
        }
        row
    });
    (pairs.len(), rows)
}

/// One line of the key-condition table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct KeyCondition {
    pub algebra: String,
    pub module: String,
    pub hom_wedge3_sym3: usize,
}

/// `dim Hom_g(⋀³V, S³V)` for a module expression `V`.
pub fn key_condition(g: &LieAlgebra, v: &ModuleExpr) -> Result<KeyCondition> {
    let a = ModuleExpr::Wedge(3, Box::new(v.clone()));
    let b = ModuleExpr::Sym(3, Box::new(v.clone()));
    Ok(KeyCondition {
        algebra: g.name(),
        module: v.to_string(),
        hom_wedge3_sym3: hom_dimension(g, &a, &b)?,
    })
}

/// Smallest `k` with `Hom_g(g ⊗ g, F^{2k}) = 0`, where `F^{2k}` is the
/// degree-`2k` part of the function algebra: `⋀^{2k} V` for odd modules and
/// `S^{2k} V` for even ones. Since `ad_μ^k` is an equivariant map
/// `g ⊗ g → F^{2k}`, this bounds the nilpotency index of `ad_μ` from above.
/// `g ⊗ g` is split into `S²g ⊕ ⋀²g` to keep the tensor products small.
pub fn nilpotency_bound(g: &LieAlgebra, v: &ModuleExpr, parity: Parity) -> Result<usize> {
    let dim = v.dim(g)?;
    let adj = Box::new(ModuleExpr::Adjoint);
    let parts = [ModuleExpr::Sym(2, adj.clone()), ModuleExpr::Wedge(2, adj)];
    for k in 1..=16usize {
        let deg = 2 * k;
        if parity == Parity::Odd && deg > dim {
            return Ok(k);
        }
        let f = match parity {
            Parity::Odd => ModuleExpr::Wedge(deg as u32, Box::new(v.clone())),
            Parity::Even => ModuleExpr::Sym(deg as u32, Box::new(v.clone())),
        };
        let mut total = 0;
        for p in &parts {
            total += hom_dimension(g, p, &f)?;
        }
        if total == 0 {
            return Ok(k);
        }
    }
    Err(Error::NonTerminating("no vanishing degree found below 32".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ModuleExpr {
        ModuleExpr::parse(s).unwrap()
    }

    #[test]
    fn trivial_module() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        assert_eq!(invariant_dimension(&g, &ModuleExpr::Trivial).unwrap(), 1);
    }

    #[test]
    fn sl2_vector_key_condition() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        assert_eq!(hom_dimension(&g, &p("wedge3(v1)"), &p("sym3(v1)")).unwrap(), 0);
    }

    #[test]
    fn schur_on_irreducibles() {
        let g = LieAlgebra::parse("sl(3)").unwrap();
        assert_eq!(hom_dimension(&g, &p("v1"), &p("v1")).unwrap(), 1);
        assert_eq!(hom_dimension(&g, &p("adjoint"), &p("adjoint")).unwrap(), 1);
        assert_eq!(hom_dimension(&g, &p("v1"), &p("v1dual")).unwrap(), 0);
    }

    #[test]
    fn additivity_over_sums() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        let s = hom_dimension(&g, &p("v1+adjoint"), &p("v1+adjoint+v1")).unwrap();
        assert_eq!(s, 1 * 2 + 1);
    }

    #[test]
    fn adjoint_wedge4_vanishes() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        assert_eq!(p("wedge4(adjoint)").dim(&g).unwrap(), 0);
        assert_eq!(hom_dimension(&g, &p("wedge4(adjoint)"), &p("sym2(adjoint)")).unwrap(), 0);
    }

    #[test]
    fn nilpotency_bounds_sl2() {
        let g = LieAlgebra::parse("sl(2)").unwrap();
        assert_eq!(nilpotency_bound(&g, &p("v1"), Parity::Even).unwrap(), 3);
        assert_eq!(nilpotency_bound(&g, &p("adjoint"), Parity::Odd).unwrap(), 2);
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = LieAlgebra::parse("sp(4)").unwrap();
        let e = hom_expr(&p("wedge2(v1)"), &p("sym2(v1)"));
        assert_eq!(
            invariant_dimension_with(&g, &e, ExecMode::Sequential).unwrap(),
            invariant_dimension_with(&g, &e, ExecMode::Parallel).unwrap()
        );
    }
}
