//! Closed-form series needed by the Lehmer generating function and by the
//! refinement identity behind it.

use num_bigint::BigInt;
use num_traits::Zero;

use super::QSeries;
use crate::numtheory::{binomial, factorial};
use crate::Rational;

/// `2·arcsin(X/2) = Σ_{n≥0} C(2n,n) / ((2n+1)·16^n) · X^{2n+1}`.
pub fn arcsin2_series(order: usize) -> QSeries {
    assert!(order >= 1, "arcsin series needs order ≥ 1");
    QSeries::from_fn(order, |i| {
        if i % 2 == 0 {
            return Rational::zero();
        }
        let n = (i / 2) as u64;
        let denom = BigInt::from(2 * n + 1) * BigInt::from(16u32).pow(n as u32);
        Rational::new(binomial(2 * n, n), denom)
    })
}

/// `sin X = Σ_{n≥0} (-1)^n X^{2n+1} / (2n+1)!`.
pub fn sin_series(order: usize) -> QSeries {
    QSeries::from_fn(order, |i| {
        if i % 2 == 0 {
            return Rational::zero();
        }
        let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
        Rational::new(BigInt::from(sign), factorial(i as u64))
    })
}

/// `Σ_{n=k}^{order} ((-1)^{n-k}/n) C(2n, n-k) q^n / (1-q)^{2n}`, truncated at
/// `order`. The factor `q^n/(1-q)^{2n}` is expanded with the closed form
/// `Σ_l C(l+2n-1, 2n-1) q^{n+l}`. The sum equals `q^k / k`.
pub fn refinement_lhs(k: usize, order: usize) -> QSeries {
    assert!(k >= 1, "refinement index starts at 1");
    let mut coeffs = vec![Rational::zero(); order + 1];
    for n in k..=order {
        let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
        let outer = Rational::new(binomial(2 * n as u64, (n - k) as u64) * sign, BigInt::from(n));
        for l in 0..=(order - n) {
            let inner = binomial((l + 2 * n - 1) as u64, (2 * n - 1) as u64);
            coeffs[n + l] += &outer * Rational::from_integer(inner);
        }
    }
    QSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn arcsin_leading_terms() {
        let s = arcsin2_series(9);
        assert_eq!(s.coeff(0), &Rational::zero());
        assert_eq!(s.coeff(1), &Rational::one());
        assert_eq!(s.coeff(2), &Rational::zero());
        assert_eq!(s.coeff(3), &Rational::new(1.into(), 24.into()));
        assert_eq!(s.coeff(5), &Rational::new(3.into(), 640.into()));
    }

    #[test]
    fn two_sin_half_inverts_arcsin() {
        let order = 20;
        let half = QSeries::q(order).scale(&Rational::new(1.into(), 2.into()));
        let two_sin_half = sin_series(order).compose(&half).unwrap().scale_int(2);
        let x = two_sin_half.compose(&arcsin2_series(order)).unwrap();
        assert_eq!(x, QSeries::q(order));
        let x = arcsin2_series(order).compose(&two_sin_half).unwrap();
        assert_eq!(x, QSeries::q(order));
    }

    #[test]
    fn refinement_identity_small() {
        for k in 1..=8 {
            let expected = QSeries::monomial(Rational::new(1.into(), BigInt::from(k)), k, 50);
            assert_eq!(refinement_lhs(k, 50), expected, "k = {k}");
        }
    }
}
