//! Randomized exactness suites shared by the `properties` and `acceptance` targets.

#![allow(dead_code)]

use std::path::PathBuf;

use gamma_mirror::exactnum::{rat, BigRat, Generator, TransMonomial, TransScalar};
use gamma_mirror::gammaseq::{apply_mult_seq, chern_from_mult_seq, inverse_gamma_series, mult_seq, ChernVector};
use gamma_mirror::input::PolytopeInput;
use gamma_mirror::toric::ToricModel;
use gamma_mirror::TruncSeries;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

pub const CASES: u32 = 256;

pub fn fixture(name: &str) -> ToricModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    PolytopeInput::read(&path).and_then(|i| i.model()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn scalar_term() -> impl Strategy<Value = TransScalar> {
    (small_rat(), -1i32..=2, -1i32..=2, 0i32..=1).prop_map(|(c, a, b, e)| {
        let mut t = TransScalar::from_rational(c);
        for (g, k) in [(Generator::Gamma, a), (Generator::Zeta(2), b), (Generator::Zeta(3), e)] {
            t = &t * &TransScalar::term(TransMonomial::generator(g, k), rat(1, 1));
        }
        t
    })
}

pub fn scalar() -> impl Strategy<Value = TransScalar> {
    prop::collection::vec(scalar_term(), 0..4).prop_map(|v| v.into_iter().sum())
}

/// Series in two variables at order 4 with arbitrary coefficients.
pub fn series2(order: u32) -> impl Strategy<Value = TruncSeries<TransScalar>> {
    prop::collection::vec(((0u32..=3, 0u32..=3), scalar()), 0..6).prop_map(move |terms| {
        TruncSeries::from_terms(2, order, terms.into_iter().map(|((a, b), c)| (vec![a, b], c))).unwrap()
    })
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    match runner.run(&strategy, test) {
        Ok(()) => Ok(CASES),
        Err(TestError::Fail(why, input)) => Err(format!("{why} for input {input:?}")),
        Err(TestError::Abort(why)) => Err(format!("aborted: {why}")),
    }
}

pub fn ring_axioms() -> Result<u32, String> {
    run((scalar(), scalar(), scalar(), series2(4), series2(4), series2(4)), |(a, b, c, x, y, z)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        let xy = x.try_mul(&y).unwrap();
        prop_assert_eq!(&xy, &y.try_mul(&x).unwrap());
        prop_assert_eq!(xy.try_mul(&z).unwrap(), x.try_mul(&y.try_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.try_mul(&y.try_add(&z).unwrap()).unwrap(), xy.try_add(&x.try_mul(&z).unwrap()).unwrap());
        Ok(())
    })
}

pub fn exp_log_round_trip() -> Result<u32, String> {
    run(series2(5), |s| {
        let s = s.try_sub(&TruncSeries::constant(2, 5, s.constant_term())).unwrap();
        prop_assert_eq!(s.exp().unwrap().log().unwrap(), s.clone());
        let f = s.try_add(&TruncSeries::one(2, 5)).unwrap();
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f);
        Ok(())
    })
}

pub fn derivative_commutation() -> Result<u32, String> {
    run((series2(5), series2(5)), |(s, t)| {
        let xy = s.derive(0).unwrap().derive(1).unwrap();
        let yx = s.derive(1).unwrap().derive(0).unwrap();
        prop_assert_eq!(&xy, &yx);
        // Leibniz rule
        let lhs = s.try_mul(&t).unwrap().derive(0).unwrap();
        let a = s.derive(0).unwrap().try_mul(&t.truncate(4)).unwrap();
        let b = s.truncate(4).try_mul(&t.derive(0).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.try_add(&b).unwrap());
        Ok(())
    })
}

/// Random Chern classes `c_i` homogeneous of degree `i` in two formal variables.
fn chern_classes(dim: usize) -> impl Strategy<Value = Vec<TruncSeries<TransScalar>>> {
    let per_degree: Vec<_> = (1..=dim)
        .map(|i| {
            prop::collection::vec(scalar(), i + 1).prop_map(move |coeffs| {
                TruncSeries::from_terms(
                    2,
                    dim as u32,
                    coeffs.into_iter().enumerate().map(|(a, c)| (vec![a as u32, (i - a) as u32], c)),
                )
                .unwrap()
            })
        })
        .collect();
    per_degree
}

pub fn mult_seq_inversion() -> Result<u32, String> {
    let dim = 4usize;
    let random_q = prop::collection::vec((1i64..=9, 1i64..=5, prop::bool::ANY), dim).prop_map(|v| {
        TruncSeries::univariate(
            v.len() as u32,
            std::iter::once(TransScalar::one())
                .chain(v.into_iter().map(|(n, d, neg)| TransScalar::from_rational(rat(if neg { -n } else { n }, d)))),
        )
    });
    let use_gamma = prop::bool::ANY;
    run((chern_classes(dim), random_q, use_gamma), move |(classes, q, use_gamma)| {
        let q = if use_gamma { inverse_gamma_series(dim as u32) } else { q };
        let polys: Vec<_> = (1..=dim).map(|k| mult_seq(&q, k).unwrap()).collect();
        // s_k = 0 cannot be inverted; such draws say nothing about the round trip
        prop_assume!(polys.iter().all(|p| !p.leading_coefficient().is_zero()));
        let chern = ChernVector::new(classes.clone()).unwrap();
        let values: Vec<_> = polys.iter().map(|p| apply_mult_seq(p, &chern).unwrap()).collect();
        let recovered = chern_from_mult_seq(&polys, &values).unwrap();
        prop_assert_eq!(recovered, classes);
        Ok(())
    })
}

pub fn intersection_symmetry() -> Result<u32, String> {
    let models = [fixture("blowup_p3.toml"), fixture("p2xp2_bicubic.toml"), fixture("p1x4.toml")];
    run((0usize..3, prop::collection::vec(0usize..16, 4), prop::collection::vec(0usize..4, 4)), |(mi, picks, order)| {
        let m = &models[mi];
        let ring = m.ring();
        let d = m.dim();
        let p = ring.num_divisors();
        let divs: Vec<usize> = picks.iter().take(d).map(|&x| x % p).collect();
        let mut exps = vec![0u32; p];
        for &i in &divs {
            exps[i] += 1;
        }
        let direct = ring.intersect(&exps);
        // product in a shuffled order
        let mut idx: Vec<usize> = divs.clone();
        for (k, &o) in order.iter().take(d).enumerate() {
            idx.swap(k, o % d);
        }
        let mut prod = ring.one();
        for &i in &idx {
            prod = prod.try_mul(&ring.divisor(i)).unwrap();
        }
        let integrated = ring.intersection_number(&prod).unwrap();
        prop_assert_eq!(integrated, TransScalar::from_rational(direct));
        // couplings are symmetric in their J indices
        let r = m.rank();
        let js: Vec<usize> = picks.iter().take(m.cy_dim()).map(|&x| x % r + 1).collect();
        let mut rev = js.clone();
        rev.reverse();
        prop_assert_eq!(m.coupling(&js).unwrap(), m.coupling(&rev).unwrap());
        Ok(())
    })
}

pub type Suite = fn() -> Result<u32, String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("ring axioms", ring_axioms),
    ("exp/log round trip", exp_log_round_trip),
    ("derivative commutation", derivative_commutation),
    ("mult-seq / chern inversion", mult_seq_inversion),
    ("intersection symmetry", intersection_symmetry),
];
