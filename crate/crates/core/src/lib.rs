//! Exact symbolic engine for quadratic moment maps on linear supermanifolds.
//!
//! The crate is organised bottom-up: [`superalgebra`] provides supercommutative
//! polynomials over the rationals, [`multivector`] builds polynomial multivector
//! fields with the Schouten bracket on top of them, [`liealg`] constructs the
//! classical Lie algebras and their modules, [`invariants`] counts invariants of
//! tensor constructions, [`moment`] assembles Poisson and quasi-Poisson
//! structures together with their moment maps, [`factorize`] performs Gauss
//! factorizations of supermatrices and [`forms`] handles differential forms.

pub mod error;
pub mod factorize;
pub mod forms;
pub mod invariants;
pub mod liealg;
pub mod linalg;
pub mod moment;
pub mod multivector;
pub mod supermatrix;
pub mod superalgebra;

pub use error::{Error, Result};
pub use superalgebra::{q, qi, GeneratorTable, Monomial, Parity, SuperPoly, Q};

/// Selects the data-parallel or the sequential code path at run time.
///
/// Without the `parallel` feature both variants run sequentially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Maps `f` over `items`, in parallel when `mode` allows it. Output order
/// always matches input order.
pub fn par_map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = mode;
    items.iter().map(f).collect()
}
