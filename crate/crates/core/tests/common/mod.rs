//! Property definitions shared by `properties.rs` and the acceptance suite.
//! Each runs `CASES` randomized cases through a proptest runner.

#![allow(dead_code)]

use ado4::catalog;
use ado4::linalg::Matrix;
use ado4::lsa::LeftSymmetricAlgebra;
use ado4::mu::{self, SearchOptions};
use ado4::pipeline;
use ado4::scalars::{poly_roots, Scalar, Tolerance};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};

pub const CASES: u32 = 1000;

const TOL: Tolerance = Tolerance { epsilon: 1e-9 };

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| match e {
        TestError::Fail(why, value) => format!("{why} for {value:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

pub fn gaussian() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(a, b, c, d)| Scalar::gaussian(a, b, c, d))
}

pub fn small_int() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(Scalar::from_int)
}

pub fn scalar_field_axioms() -> Result<(), String> {
    run((gaussian(), gaussian(), gaussian()), |(a, b, c)| {
        let zero = Scalar::zero();
        let one = Scalar::one();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a + &(-&a), zero.clone());
        match a.recip() {
            Some(inv) => prop_assert_eq!(&a * &inv, one.clone()),
            None => prop_assert!(a.is_zero()),
        }
        // the approximate image is a ring homomorphism up to rounding
        let lhs = (&a * &b).to_complex();
        let rhs = a.to_complex() * b.to_complex();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a.clone());
        Ok(())
    })
}

/// Random `r x c` matrices of rank at most `k`, built as a product.
fn low_rank_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=5, 1usize..=5).prop_flat_map(|(r, c, k)| {
        (
            proptest::collection::vec(small_int(), r * k),
            proptest::collection::vec(small_int(), k * c),
        )
            .prop_map(move |(a, b)| {
                let a = Matrix::new(r, k, a).unwrap();
                let b = Matrix::new(k, c, b).unwrap();
                a.mul(&b).unwrap()
            })
    })
}

pub fn rank_nullity() -> Result<(), String> {
    run(low_rank_matrix(), |m| {
        let exact = Tolerance::new(0.0);
        let null = m.nullspace(exact);
        prop_assert_eq!(m.rank(exact) + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        // the approximate path agrees on integer matrices this small
        prop_assert_eq!(m.to_approx().rank(TOL), m.rank(exact));
        Ok(())
    })
}

/// Every left-symmetric product the catalog yields at seed 0, printed or
/// derived.
pub fn verified_lsas() -> Vec<LeftSymmetricAlgebra> {
    let mut out = Vec::new();
    for (name, params) in pipeline::sampled_instances(0) {
        if let Ok((_, rho, printed)) = pipeline::tabulated_pair(name, &params) {
            if printed.is_exact() && printed.is_left_symmetric(TOL) {
                out.push(printed);
            }
            if rho.is_exact() {
                if let Ok(d) = pipeline::derive_from_rep(&rho, TOL) {
                    out.push(d.lsa);
                }
            }
        }
    }
    assert!(out.len() > 10);
    out
}

/// A catalog left-symmetric algebra in a random basis, or a random
/// product on a small space (almost never left-symmetric).
fn lsa_candidate(pool: Vec<LeftSymmetricAlgebra>) -> impl Strategy<Value = LeftSymmetricAlgebra> {
    let pool = std::sync::Arc::new(pool);
    let n = pool.len();
    let from_pool = (0..n)
        .prop_flat_map(move |k| {
            let d = pool[k].dim();
            (Just(pool[k].clone()), proptest::collection::vec(small_int(), d * d))
        })
        .prop_filter_map("singular basis change", |(a, p)| {
            let d = a.dim();
            a.change_basis(&Matrix::new(d, d, p).unwrap(), Tolerance::new(0.0)).ok()
        });
    let random = (1usize..=2).prop_flat_map(|d| {
        proptest::collection::vec((-1i64..=1).prop_map(Scalar::from_int), d * d * d).prop_map(move |c| {
            let entries = (0..d * d).map(|k| ((k / d, k % d), c[k * d..(k + 1) * d].to_vec())).collect();
            LeftSymmetricAlgebra::new("random", d, entries).unwrap()
        })
    });
    prop_oneof![4 => from_pool, 1 => random]
}

pub fn associator_symmetry_gives_jacobi() -> Result<(), String> {
    let pool = verified_lsas();
    run(lsa_candidate(pool), |a| {
        let exact = Tolerance::new(0.0);
        if a.is_left_symmetric(exact) {
            let h = a.sub_adjacent(exact).unwrap();
            prop_assert!(h.jacobi_check(exact).is_empty());
        }
        Ok(())
    })
}

pub fn left_regular_is_a_homomorphism() -> Result<(), String> {
    let pool = verified_lsas();
    run(lsa_candidate(pool), |a| {
        let exact = Tolerance::new(0.0);
        if a.is_left_symmetric(exact) {
            let l = a.left_regular_rep(exact).unwrap();
            prop_assert!(l.check_homomorphism(exact).is_empty());
        }
        Ok(())
    })
}

pub fn poly_roots_deterministic() -> Result<(), String> {
    let poly = (1usize..=4).prop_flat_map(|d| {
        (gaussian().prop_filter("nonzero leading coefficient", |c| !c.is_zero()), proptest::collection::vec(gaussian(), d))
    });
    run(poly, |(lead, rest)| {
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        let a = poly_roots(&coeffs).unwrap();
        let b = poly_roots(&coeffs).unwrap();
        prop_assert_eq!(a.len(), coeffs.len() - 1);
        prop_assert_eq!(
            a.iter().map(|z| z.to_complex()).collect::<Vec<_>>(),
            b.iter().map(|z| z.to_complex()).collect::<Vec<_>>()
        );
        Ok(())
    })
}

pub fn search_deterministic() -> Result<(), String> {
    let opts = SearchOptions {
        max_iterations: 15,
        ..SearchOptions::default()
    };
    let algebras = ["r2", "c2", "r2_c", "n3"];
    run((0..algebras.len(), 1usize..=3, any::<u64>()), |(k, m, seed)| {
        let g = catalog::instantiate(algebras[k], &catalog::Params::new()).unwrap();
        let a = mu::search_faithful_with(&g, m, 2, seed, opts).unwrap();
        let b = mu::search_faithful_with(&g, m, 2, seed, opts).unwrap();
        prop_assert_eq!(a, b);
        Ok(())
    })
}
