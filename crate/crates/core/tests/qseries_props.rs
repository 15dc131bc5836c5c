use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use macmahon_core::numtheory::{binomial, factorial};
use macmahon_core::qseries::{arcsin2_series, refinement_lhs, sin_series};
use macmahon_core::{Monomial, MultiPoly, PolySeries, QSeries, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn series(order: usize) -> impl Strategy<Value = QSeries> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), order + 1)
        .prop_map(|cs| QSeries::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

#[test]
fn multiplication_examples() {
    let order = 12;
    let one = QSeries::one(order);
    let f = QSeries::from_fn(order, |n| rat(n as i64 * n as i64 - 3, 1 + n as i64));
    assert_eq!(&one * &f, f);
    let geometric = QSeries::from_fn(order, |_| Rational::one());
    let one_minus_q = &one - &QSeries::q(order);
    assert_eq!(&one_minus_q * &geometric, one);
    let one_plus_q = &one + &QSeries::q(order);
    assert_eq!(&one_plus_q * &one_plus_q, QSeries::from_integers([1, 2, 1].into_iter().chain(vec![0; order - 2])));
}

#[test]
fn exp_and_log_closed_forms() {
    let order = 20;
    let e = QSeries::q(order).exp().unwrap();
    assert_eq!(e, QSeries::from_fn(order, |n| Rational::new(BigInt::one(), factorial(n as u64))));
    let inv = (&QSeries::one(order) - &QSeries::q(order)).inverse().unwrap();
    let l = inv.log().unwrap();
    assert_eq!(l, QSeries::from_fn(order, |n| if n == 0 { Rational::zero() } else { rat(1, n as i64) }));
}

#[test]
fn central_binomial_exponential_solves_quadratic() {
    let order = 30;
    let inner = QSeries::from_fn(order, |n| {
        if n == 0 {
            return Rational::zero();
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Rational::new(binomial(2 * n as u64, n as u64) * sign, BigInt::from(2 * n))
    });
    let g = inner.scale(&rat(-1, 1)).exp().unwrap();
    assert_eq!(&(&g * &g) - &g, QSeries::q(order));
}

#[test]
fn composition_inverses() {
    let order = 20;
    let x = QSeries::q(order);
    let f = QSeries::from_fn(order, |n| rat(n as i64 % 5 - 2, 3));
    assert_eq!(f.compose(&x).unwrap(), f);

    // 2 sin(y/2) undoes y = 2 arcsin(X/2).
    let half = arcsin2_series(order).scale(&rat(1, 2));
    assert_eq!(sin_series(order).compose(&half).unwrap().scale_int(2), x);

    let exp_minus_one = &x.exp().unwrap() - &QSeries::one(order);
    let log1p = (&QSeries::one(order) + &x).log().unwrap();
    assert_eq!(exp_minus_one.compose(&log1p).unwrap(), x);
}

#[test]
fn arcsin_coefficients() {
    let s = arcsin2_series(10);
    assert_eq!(s.coeff(1), &Rational::one());
    assert_eq!(s.coeff(2), &Rational::zero());
    assert_eq!(s.coeff(3), &rat(1, 24));
}

#[test]
fn d_operator_examples() {
    let order = 10;
    assert!(QSeries::constant(rat(7, 3), order).d_operator().is_zero());
    let q3 = QSeries::monomial(Rational::one(), 3, order);
    assert_eq!(q3.d_operator(), q3.scale_int(3));
}

#[test]
fn refinement_identity_to_order_fifty() {
    for k in 1..=8 {
        assert_eq!(refinement_lhs(k, 50), QSeries::monomial(rat(1, k as i64), k, 50), "k = {k}");
    }
}

#[test]
fn exponential_of_a_polynomial_monomial() {
    let order = 8;
    let x2 = MultiPoly::var(2);
    let arg = PolySeries::from_scalar_series(&QSeries::monomial(Rational::one(), 2, order), &x2);
    let e = arg.exp().unwrap();
    assert_eq!(e.coeff(0), &MultiPoly::one());
    assert_eq!(e.coeff(2), &x2);
    assert_eq!(e.coeff(4), &MultiPoly::term(rat(1, 2), Monomial::from_powers([(2, 2)])));
    assert_eq!(e.coeff(6), &MultiPoly::term(rat(1, 6), Monomial::from_powers([(2, 3)])));
    assert!(e.coeff(1).is_zero() && e.coeff(3).is_zero());
}

proptest! {
    #[test]
    fn ring_axioms(a in series(15), b in series(15), c in series(15)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn leibniz(f in series(25), g in series(25)) {
        prop_assert_eq!((&f * &g).d_operator(), &(&f.d_operator() * &g) + &(&f * &g.d_operator()));
    }

    #[test]
    fn dilation_is_a_ring_map(f in series(24), g in series(24), m in 1usize..=4) {
        prop_assert_eq!((&f * &g).dilate(m), &f.dilate(m) * &g.dilate(m));
    }

    #[test]
    fn log_inverts_exp(mut a in series(20)) {
        a.set_coeff(0, Rational::zero());
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }
}
