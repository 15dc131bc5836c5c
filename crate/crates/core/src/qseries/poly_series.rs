use std::ops::{Add, Mul};

use num_bigint::BigInt;

use super::{QSeries, SeriesError};
use crate::lehmer::MultiPoly;
use crate::Rational;

/// Truncated power series in an auxiliary variable `X` whose coefficients are
/// polynomials in `x₂, x₄, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    coeffs: Vec<MultiPoly>,
}

impl PolySeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = MultiPoly::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<MultiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        Self { coeffs }
    }

    /// `p · s(X)` for a scalar series `s`.
    pub fn from_scalar_series(s: &QSeries, p: &MultiPoly) -> Self {
        Self {
            coeffs: s.coeffs().iter().map(|c| p.scale(c)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &MultiPoly {
        assert!(n <= self.order(), "X^{n} lies beyond the truncation order");
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `exp(a)` for `a_0 = 0`, same recurrence as the scalar case.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let order = self.order();
        let mut f = Vec::with_capacity(order + 1);
        f.push(MultiPoly::one());
        for n in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    let t = &self.coeffs[k] * &f[n - k];
                    acc = &acc + &t.scale(&int(k));
                }
            }
            f.push(acc.scale(&int(n).recip()));
        }
        Ok(Self { coeffs: f })
    }

    /// `log(f)` for `f_0 = 1`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let order = self.order();
        let mut a = Vec::with_capacity(order + 1);
        a.push(MultiPoly::zero());
        for n in 1..=order {
            let mut acc = self.coeffs[n].scale(&int(n));
            for k in 1..n {
                if !a[k].is_zero() {
                    let t: MultiPoly = &a[k] * &self.coeffs[n - k];
                    acc = &acc - &t.scale(&int(k));
                }
            }
            a.push(acc.scale(&int(n).recip()));
        }
        Ok(Self { coeffs: a })
    }
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Add for &PolySeries {
    type Output = PolySeries;

    fn add(self, rhs: &PolySeries) -> PolySeries {
        PolySeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul for &PolySeries {
    type Output = PolySeries;

    fn mul(self, rhs: &PolySeries) -> PolySeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![MultiPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        PolySeries { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lehmer::Monomial;

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(PolySeries::zero(6).exp().unwrap(), PolySeries::one(6));
    }

    #[test]
    fn exp_of_monomial() {
        // exp(x2·X²) = 1 + x2 X² + x2²/2 X⁴ + x2³/6 X⁶
        let order = 7;
        let x2 = MultiPoly::var(2);
        let a = PolySeries::from_scalar_series(&QSeries::monomial(Rational::from_integer(1.into()), 2, order), &x2);
        let e = a.exp().unwrap();
        for k in 0..=3u32 {
            let expected = MultiPoly::term(
                Rational::new(1.into(), crate::numtheory::factorial(k as u64)),
                Monomial::from_powers([(2, k)]),
            );
            assert_eq!(e.coeff(2 * k as usize), &expected);
            if 2 * k as usize + 1 <= order {
                assert!(e.coeff(2 * k as usize + 1).is_zero());
            }
        }
        assert_eq!(e.log().unwrap(), a);
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert_eq!(PolySeries::one(3).exp(), Err(SeriesError::ExpConstantTerm));
        assert_eq!(PolySeries::zero(3).log(), Err(SeriesError::LogConstantTerm));
    }

    #[test]
    fn multiplication_truncates() {
        let x2 = MultiPoly::var(2);
        let a = PolySeries::from_scalar_series(&QSeries::from_integers([1, 1, 0]), &x2);
        let b = PolySeries::from_scalar_series(&QSeries::from_integers([1, 1]), &MultiPoly::one());
        let p = &a * &b;
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeff(1), &x2.scale(&Rational::from_integer(2.into())));
        let sum = &a + &a;
        assert_eq!(sum.coeff(0), &x2.scale(&Rational::from_integer(2.into())));
        assert!(PolySeries::zero(2).coeff(2).is_zero());
    }
}
