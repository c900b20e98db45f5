#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use quasimoment_core::factorize::gauss_factorize;
use quasimoment_core::forms::FormSpace;
use quasimoment_core::linalg::RatMatrix;
use quasimoment_core::multivector::MvSpace;
use quasimoment_core::supermatrix::{agree_to_order, SuperMatrix};
use quasimoment_core::{q, qi, GeneratorTable, Parity, SuperPoly};

pub const SEED: u64 = 0x51_7E_AD_C0_FF_EE;
pub const CASES: u32 = 256;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Raw random polynomial: list of (numerator, denominator, generator list).
pub type RawPoly = Vec<(i64, i64, Vec<usize>)>;

pub fn raw_poly(gens: usize, max_terms: usize, max_len: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (
            prop_oneof![-3i64..=-1, 1i64..=3],
            prop_oneof![Just(1i64), Just(2), Just(3)],
            prop::collection::vec(0..gens, 0..=max_len),
        ),
        0..=max_terms,
    )
}

pub fn build(table: &Arc<GeneratorTable>, raw: &RawPoly) -> SuperPoly {
    let mut p = SuperPoly::zero(table);
    for (n, d, idx) in raw {
        p.add_assign(&SuperPoly::product_of(table, q(*n, *d), idx));
    }
    p
}

pub fn parity_part(p: &SuperPoly, par: Parity) -> SuperPoly {
    p.filter(|m| m.parity() == par)
}

pub fn minus_one_pow(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Two even and two odd coordinates.
pub fn mixed_space() -> MvSpace {
    MvSpace::new(vec![
        ("x".into(), Parity::Even),
        ("y".into(), Parity::Even),
        ("a".into(), Parity::Odd),
        ("b".into(), Parity::Odd),
    ])
    .unwrap()
}

pub fn mixed_forms() -> FormSpace {
    FormSpace::new(vec![
        ("x".into(), Parity::Even),
        ("y".into(), Parity::Even),
        ("a".into(), Parity::Odd),
        ("b".into(), Parity::Odd),
    ])
    .unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

// ---------------------------------------------------------------------------
// Schouten bracket

pub fn schouten_strategy() -> impl Strategy<Value = (RawPoly, RawPoly, RawPoly, u32, u32, u32)> {
    (raw_poly(8, 3, 3), raw_poly(8, 3, 3), raw_poly(8, 3, 3), 0u32..2, 0u32..2, 0u32..2)
}

/// Graded Jacobi identity of the Schouten bracket, with the shifted grading.
pub fn schouten_jacobi(args: &(RawPoly, RawPoly, RawPoly, u32, u32, u32)) -> Result<(), TestCaseError> {
    let s = mixed_space();
    let t = s.table();
    let (pp, pq) = (Parity::from_bit(args.3), Parity::from_bit(args.4));
    let p = parity_part(&build(t, &args.0), pp);
    let qq = parity_part(&build(t, &args.1), pq);
    let r = build(t, &args.2);
    let lhs = s.schouten(&p, &s.schouten(&qq, &r));
    let sg = minus_one_pow((args.3 + 1) * (args.4 + 1));
    let rhs = s
        .schouten(&s.schouten(&p, &qq), &r)
        .add(&s.schouten(&qq, &s.schouten(&p, &r)).scale(&qi(sg)));
    check(lhs == rhs, || format!("P={p} Q={qq} R={r}: {} != {}", lhs, rhs))
}

/// Leibniz rule of the Schouten bracket in its second argument.
pub fn schouten_leibniz(args: &(RawPoly, RawPoly, RawPoly, u32, u32, u32)) -> Result<(), TestCaseError> {
    let s = mixed_space();
    let t = s.table();
    let (pp, pq) = (Parity::from_bit(args.3), Parity::from_bit(args.4));
    let p = parity_part(&build(t, &args.0), pp);
    let qq = parity_part(&build(t, &args.1), pq);
    let r = build(t, &args.2);
    let lhs = s.schouten(&p, &qq.mul(&r));
    let sg = minus_one_pow((args.3 + 1) * args.4);
    let rhs = s
        .schouten(&p, &qq)
        .mul(&r)
        .add(&qq.mul(&s.schouten(&p, &r)).scale(&qi(sg)));
    check(lhs == rhs, || format!("P={p} Q={qq} R={r}"))
}

// ---------------------------------------------------------------------------
// Jacobiator of a bivector bracket

pub fn jacobiator_strategy() -> impl Strategy<Value = (RawPoly, RawPoly, RawPoly, RawPoly, u32, u32, u32)> {
    (
        prop::collection::vec(
            (
                prop_oneof![-3i64..=-1, 1i64..=3],
                prop_oneof![Just(1i64), Just(2)],
                prop::collection::vec(0usize..4, 0..=2),
                0usize..4,
                0usize..4,
            ),
            1..=4,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(n, d, mut c, i, j)| {
                    c.push(4 + i);
                    c.push(4 + j);
                    (n, d, c)
                })
                .collect::<RawPoly>()
        }),
        raw_poly(4, 3, 2),
        raw_poly(4, 3, 2),
        raw_poly(4, 3, 2),
        0u32..2,
        0u32..2,
        0u32..2,
    )
}

/// `{f,{g,h}} − {{f,g},h} − (−1)^{|f||g|}{g,{f,h}} = (s/2)[[[[[[ [[π,π]], f]], g]], h]]`
/// with `s = −(−1)^{|g|}`.
pub fn jacobiator(args: &(RawPoly, RawPoly, RawPoly, RawPoly, u32, u32, u32)) -> Result<(), TestCaseError> {
    let s = mixed_space();
    let t = s.table();
    let pi = parity_part(&build(t, &args.0), Parity::Even);
    let (pf, pg, ph) = (Parity::from_bit(args.4), Parity::from_bit(args.5), Parity::from_bit(args.6));
    let f = parity_part(&build(t, &args.1), pf);
    let g = parity_part(&build(t, &args.2), pg);
    let h = parity_part(&build(t, &args.3), ph);
    let br = |a: &SuperPoly, b: &SuperPoly| s.bracket(&pi, a, b);
    let j = br(&f, &br(&g, &h))
        .sub(&br(&br(&f, &g), &h))
        .sub(&br(&g, &br(&f, &h)).scale(&qi(minus_one_pow(args.4 * args.5))));
    let sq = s.schouten(&pi, &pi);
    let ev = s.eval_trivector(&sq, &f, &g, &h);
    let expected = ev.scale(&q(-minus_one_pow(args.5), 2));
    check(j == expected, || format!("pi={pi} f={f} g={g} h={h}: {j} vs {expected}"))
}

// ---------------------------------------------------------------------------
// Forms

pub fn form_strategy() -> impl Strategy<Value = RawPoly> {
    raw_poly(8, 4, 3)
}

pub fn d_squared(raw: &RawPoly) -> Result<(), TestCaseError> {
    let f = mixed_forms();
    let w = build(f.table(), raw);
    check(f.d(&f.d(&w)).is_zero(), || format!("d^2 of {w}"))
}

pub fn cartan_strategy() -> impl Strategy<Value = (Vec<RawPoly>, RawPoly, bool)> {
    (prop::collection::vec(raw_poly(4, 2, 2), 4), raw_poly(8, 3, 3), any::<bool>())
}

/// `L_X = dι_X + ι_X d` (graded commutator) for homogeneous vector fields.
pub fn cartan_formula(args: &(Vec<RawPoly>, RawPoly, bool)) -> Result<(), TestCaseError> {
    let f = mixed_forms();
    let t = f.table();
    let field_parity = if args.2 { Parity::Odd } else { Parity::Even };
    let comps: Vec<SuperPoly> = args
        .0
        .iter()
        .enumerate()
        .map(|(a, raw)| parity_part(&build(t, raw), t.parity(a).add(field_parity)))
        .collect();
    let w = build(t, &args.1);
    let r = f
        .cartan_residual(&comps, &w)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(r.is_zero(), || format!("residual {r}"))
}

// ---------------------------------------------------------------------------
// Supermatrices

pub fn matrix_table() -> Arc<GeneratorTable> {
    GeneratorTable::new(vec![
        ("x".into(), Parity::Even),
        ("a".into(), Parity::Odd),
        ("b".into(), Parity::Odd),
        ("c".into(), Parity::Odd),
        ("d".into(), Parity::Odd),
    ])
    .unwrap()
}

pub const MATRIX_ORDER: u32 = 6;

pub fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<i64>, Vec<RawPoly>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-3i64..=3, n * n),
            prop::collection::vec(raw_poly(5, 2, 3), n * n),
        )
    })
}

fn nilpotent_even(t: &Arc<GeneratorTable>, raw: &RawPoly) -> SuperPoly {
    let p = parity_part(&build(t, raw), Parity::Even);
    p.filter(|m| !m.is_unit())
}

pub fn inverse_round_trip(args: &(usize, Vec<i64>, Vec<RawPoly>)) -> Result<(), TestCaseError> {
    let (n, body, raws) = args;
    let t = matrix_table();
    let mut b = RatMatrix::zeros(*n, *n);
    for i in 0..*n {
        for j in 0..*n {
            b.data[i][j] = qi(body[i * n + j]);
        }
    }
    if b.inverse().is_err() {
        return Ok(());
    }
    let mut m = SuperMatrix::from_rational(&t, &b);
    for i in 0..*n {
        for j in 0..*n {
            m.entries[i][j].add_assign(&nilpotent_even(&t, &raws[i * n + j]));
        }
    }
    let o = Some(MATRIX_ORDER);
    let inv = m.inverse(o).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let id = SuperMatrix::identity(&t, *n);
    check(
        agree_to_order(&m.mul_trunc(&inv, o), &id, o) && agree_to_order(&inv.mul_trunc(&m, o), &id, o),
        || format!("inverse failed for\n{m}"),
    )
}

pub fn gauss_strategy() -> impl Strategy<Value = (usize, Vec<RawPoly>, Vec<usize>, Vec<i64>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(raw_poly(5, 2, 3), n * n),
            prop::collection::vec(0usize..5, n),
            prop::collection::vec(-2i64..=2, n * n),
        )
    })
}

const SQUARES: [(i64, i64); 5] = [(1, 1), (4, 1), (9, 4), (1, 4), (16, 9)];

/// Builds `Φ = N₊ D N₋` with square pivots and checks `L₊ L₋⁻¹ = Φ`.
pub fn gauss_reconstruction(args: &(usize, Vec<RawPoly>, Vec<usize>, Vec<i64>)) -> Result<(), TestCaseError> {
    let (n, raws, diag, body) = args;
    let n = *n;
    let t = matrix_table();
    let o = Some(MATRIX_ORDER);
    let mut up = SuperMatrix::identity(&t, n);
    let mut lo = SuperMatrix::identity(&t, n);
    let mut d = SuperMatrix::zero(&t, n);
    for i in 0..n {
        for j in 0..n {
            let nil = nilpotent_even(&t, &raws[i * n + j]);
            let c = SuperPoly::constant(&t, qi(body[i * n + j]));
            if i < j {
                up.entries[i][j] = c.add(&nil);
            } else if i > j {
                lo.entries[i][j] = c.add(&nil);
            } else {
                let (a, b) = SQUARES[diag[i]];
                d.entries[i][i] = SuperPoly::constant(&t, q(a, b)).add(&nil);
            }
        }
    }
    let phi = up.mul_trunc(&d, o).mul_trunc(&lo, o);
    let l = gauss_factorize(&phi, o).map_err(|e| TestCaseError::fail(e.to_string()))?;
    l.validate(o).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let prod = l.product(o).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(agree_to_order(&prod, &phi, o), || format!("reconstruction failed for\n{phi}"))
}

// ---------------------------------------------------------------------------

/// Runs one property with the pinned seed; returns the number of cases.
pub fn run_property<S, F>(strategy: S, test: F) -> Result<u32, String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(config());
    runner.run(&strategy, test).map_err(|e| e.to_string())?;
    Ok(CASES)
}
