//! Normalized Lehmer polynomials `Λ_k(x₂, …, x_{2k})`.
//!
//! They are the `X^{2k}` coefficients of
//! `exp(2 Σ_j (-1)^{j-1}/(2j)! · (2 arcsin(X/2))^{2j} · x_{2j})`, built here
//! as a [`PolySeries`] with exact rational arithmetic.

mod multipoly;

pub use multipoly::{Monomial, MultiPoly};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{bernoulli, factorial};
use crate::qseries::{arcsin2_series, PolySeries, QSeries};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LehmerError {
    #[error("no series bound for variable x{0}")]
    MissingVariable(u32),
    #[error("at least one series binding is needed to fix the truncation order")]
    NoBindings,
}

/// The exponent `2 Σ_{j=1}^{kmax} (-1)^{j-1}/(2j)! (2 arcsin(X/2))^{2j} x_{2j}`
/// as a series in `X` of order `2·kmax`.
pub fn lehmer_exponent(kmax: usize) -> PolySeries {
    assert!(kmax >= 1, "kmax must be positive");
    let order = 2 * kmax;
    let arcsin = arcsin2_series(order);
    let arcsin_sq = &arcsin * &arcsin;
    let mut power = QSeries::one(order);
    let mut acc = PolySeries::zero(order);
    for j in 1..=kmax {
        power = &power * &arcsin_sq;
        let sign = if j % 2 == 1 { 2 } else { -2 };
        let c = Rational::new(BigInt::from(sign), factorial(2 * j as u64));
        let var = MultiPoly::var(2 * j as u32).scale(&c);
        acc = &acc + &PolySeries::from_scalar_series(&power, &var);
    }
    acc
}

/// `[Λ_1, …, Λ_kmax]`.
pub fn lehmer_polynomials(kmax: usize) -> Vec<MultiPoly> {
    let generating = lehmer_exponent(kmax)
        .exp()
        .expect("exponent has zero constant term");
    (1..=kmax).map(|k| generating.coeff(2 * k).clone()).collect()
}

/// Evaluates `p` in the ring of truncated q-series, binding `x_v ↦ args[v]`.
/// The result has the smallest order among the bindings.
pub fn evaluate_at_series(
    p: &MultiPoly,
    args: &BTreeMap<u32, QSeries>,
) -> Result<QSeries, LehmerError> {
    let order = args
        .values()
        .map(QSeries::order)
        .min()
        .ok_or(LehmerError::NoBindings)?;
    let mut max_exp: BTreeMap<u32, u32> = BTreeMap::new();
    for (m, _) in p.terms() {
        for (v, e) in m.powers() {
            let slot = max_exp.entry(v).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    // powers[v][e-1] = args[v]^e
    let mut powers: BTreeMap<u32, Vec<QSeries>> = BTreeMap::new();
    for (&v, &emax) in &max_exp {
        let base = args
            .get(&v)
            .ok_or(LehmerError::MissingVariable(v))?
            .truncate(order);
        let mut list = vec![base.clone()];
        for _ in 1..emax {
            let next = list.last().expect("non-empty") * &base;
            list.push(next);
        }
        powers.insert(v, list);
    }
    let mut total = QSeries::zero(order);
    for (m, c) in p.terms() {
        let mut term: Option<QSeries> = None;
        for (v, e) in m.powers() {
            let factor = &powers[&v][e as usize - 1];
            term = Some(match term {
                None => factor.clone(),
                Some(t) => &t * factor,
            });
        }
        let term = match term {
            None => QSeries::constant(c.clone(), order),
            Some(t) => t.scale(c),
        };
        total = &total + &term;
    }
    Ok(total)
}

/// Lehmer's original polynomial
/// `Ω_k = (-1)^k (2k)!/(2 B_{2k}) · Λ_k(-B₂x₂, -B₄x₄, …, -B_{2k}x_{2k})`.
pub fn omega_polynomial(k: usize) -> MultiPoly {
    assert!(k >= 1, "k must be positive");
    let lambda = lehmer_polynomials(k).pop().expect("k ≥ 1");
    let b = |v: u32| bernoulli(v).expect("even index");
    let substituted = lambda.rescale_variables(|v| -b(v));
    let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
    let scale = sign * Rational::from_integer(factorial(2 * k as u64))
        / (Rational::from_integer(BigInt::from(2)) * b(2 * k as u32));
    substituted.scale(&scale)
}

/// Whether every monomial has weight at most `2k` and the unique monomial of
/// top degree is `x₂^k` with coefficient `1/k!`.
pub fn satisfies_weight_grading(lambda: &MultiPoly, k: usize) -> bool {
    let top = Monomial::from_powers([(2, k as u32)]);
    let weights_ok = lambda.terms().all(|(m, _)| m.weight() as usize <= 2 * k);
    let degree_ok = lambda
        .terms()
        .all(|(m, _)| (m.degree() as usize) < k || *m == top);
    let lead = lambda.coefficient(&top) == Rational::new(BigInt::one(), factorial(k as u64));
    weights_ok && degree_ok && lead && lambda.constant_term().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn mono(powers: &[(u32, u32)]) -> Monomial {
        Monomial::from_powers(powers.iter().copied())
    }

    #[test]
    fn first_two_polynomials() {
        let l = lehmer_polynomials(2);
        assert_eq!(l[0], MultiPoly::var(2));
        let expected = MultiPoly::from_terms([
            (r(6, 12), mono(&[(2, 2)])),
            (r(1, 12), mono(&[(2, 1)])),
            (r(-1, 12), mono(&[(4, 1)])),
        ]);
        assert_eq!(l[1], expected);
    }

    #[test]
    fn evaluate_constant_and_missing() {
        let p = &MultiPoly::var(2) + &MultiPoly::constant(r(3, 4));
        let mut args = BTreeMap::new();
        args.insert(2, QSeries::zero(5));
        assert_eq!(evaluate_at_series(&p, &args).unwrap(), QSeries::constant(r(3, 4), 5));
        let q = &p * &MultiPoly::var(4);
        assert_eq!(evaluate_at_series(&q, &args), Err(LehmerError::MissingVariable(4)));
        assert_eq!(
            evaluate_at_series(&p, &BTreeMap::new()),
            Err(LehmerError::NoBindings)
        );
    }

    #[test]
    fn omega_small_cases() {
        assert_eq!(omega_polynomial(1), MultiPoly::var(2));
        // Λ₂ under x₂ ↦ -x₂/6, x₄ ↦ x₄/30, scaled by 4!/(2·B₄) = -360.
        let lambda2 = &lehmer_polynomials(2)[1];
        let direct = lambda2
            .rescale_variables(|v| if v == 2 { r(-1, 6) } else { r(1, 30) })
            .scale(&r(-360, 1));
        assert_eq!(omega_polynomial(2), direct);
        for k in 1..=4 {
            assert!(omega_polynomial(k).constant_term().is_zero());
        }
    }

    #[test]
    fn weight_grading_up_to_eight() {
        for (i, lambda) in lehmer_polynomials(8).iter().enumerate() {
            assert!(satisfies_weight_grading(lambda, i + 1), "Λ_{}", i + 1);
            let vars = lambda.variables();
            assert!(vars.iter().all(|&v| v as usize <= 2 * (i + 1)));
        }
    }

    #[test]
    fn regenerating_the_exponent() {
        let kmax = 5;
        let order = 2 * kmax;
        let mut coeffs = vec![MultiPoly::zero(); order + 1];
        coeffs[0] = MultiPoly::one();
        for (k, lambda) in lehmer_polynomials(kmax).into_iter().enumerate() {
            coeffs[2 * (k + 1)] = lambda;
        }
        let log = PolySeries::from_coeffs(coeffs).log().unwrap();
        assert_eq!(log, lehmer_exponent(kmax));
    }
}
