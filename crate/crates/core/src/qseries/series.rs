use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::SeriesError;
use crate::Rational;

/// Power series `Σ_{n=0}^{order} c_n q^n` known modulo `q^{order+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·q^power`, which is the zero series if `power > order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The series `q` itself.
    pub fn q(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// Builds a series from its coefficient list; the order is `len - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        Self { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Builds `Σ f(n) q^n` for `n = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`.
    ///
    /// # Panics
    /// If `n` exceeds the truncation order.
    pub fn coeff(&self, n: usize) -> &Rational {
        assert!(
            n <= self.order(),
            "coefficient of q^{n} is unknown for a series of order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: Rational) {
        assert!(n <= self.order(), "q^{n} lies beyond the truncation order");
        self.coeffs[n] = c;
    }

    /// Coefficients as integers, or `None` if some coefficient is not integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The same series known only to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the truncation order");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// First power at which the two series differ, up to their shared order.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Multiplication by `q^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Self {
        let order = self.order();
        Self::from_fn(order, |n| {
            if n >= s {
                self.coeffs[n - s].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Substitution `q ↦ q^m`; the order is kept, so the tail is exact.
    pub fn dilate(&self, m: usize) -> Self {
        assert!(m >= 1, "dilation factor must be positive");
        let order = self.order();
        Self::from_fn(order, |n| {
            if n % m == 0 {
                self.coeffs[n / m].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// `D = q d/dq`: multiplies the `n`-th coefficient by `n`.
    pub fn d_operator(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// Applies the operator `Σ_j poly[j] D^j`.
    pub fn apply_d_polynomial(&self, poly: &[i64]) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let n = BigInt::from(n);
                    let mut power = BigInt::one();
                    let mut factor = BigInt::zero();
                    for &p in poly {
                        factor += &power * p;
                        power *= &n;
                    }
                    c * Rational::from_integer(factor)
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = a0.recip();
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `exp(a)` for `a_0 = 0`, from `n f_n = Σ_{k=1}^{n} k a_k f_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let order = self.order();
        let mut f: Vec<Rational> = Vec::with_capacity(order + 1);
        f.push(Rational::one());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &f[n - k] * Rational::from_integer(BigInt::from(k));
                }
            }
            f.push(acc / Rational::from_integer(BigInt::from(n)));
        }
        Ok(Self { coeffs: f })
    }

    /// `log(f)` for `f_0 = 1`, inverting the recurrence used by [`QSeries::exp`].
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm);
        }
        let order = self.order();
        let mut a: Vec<Rational> = Vec::with_capacity(order + 1);
        a.push(Rational::zero());
        for n in 1..=order {
            let mut acc = &self.coeffs[n] * Rational::from_integer(BigInt::from(n));
            for k in 1..n {
                if !a[k].is_zero() {
                    acc -= &a[k] * &self.coeffs[n - k] * Rational::from_integer(BigInt::from(k));
                }
            }
            a.push(acc / Rational::from_integer(BigInt::from(n)));
        }
        Ok(Self { coeffs: a })
    }

    /// `self(inner(q))`, truncated to the smaller order. Horner evaluation.
    pub fn compose(&self, inner: &QSeries) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::ComposeConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = QSeries::constant(self.coeffs[order].clone(), order);
        for c in self.coeffs[..order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

fn lcm_of_denominators(coeffs: &[Rational]) -> BigInt {
    coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

// Cauchy product over integers. Uses i128 accumulators when the operand sizes
// guarantee no overflow, otherwise falls back to BigInt.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let max_bits = |v: &[BigInt]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let len_bits = u64::from(usize::BITS - len.leading_zeros());
    if max_bits(a) + max_bits(b) + len_bits <= 125 {
        let a: Vec<i128> = a.iter().map(|x| x.to_i128().expect("fits")).collect();
        let b: Vec<i128> = b.iter().map(|x| x.to_i128().expect("fits")).collect();
        let mut out = vec![0i128; len];
        for (i, &x) in a.iter().enumerate().take(len) {
            if x == 0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b.iter()) {
                *o += x * y;
            }
        }
        out.into_iter().map(BigInt::from).collect()
    } else {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out[i..].iter_mut().zip(b.iter()) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
        out
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    /// Schoolbook product on common-denominator integer vectors.
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let len = order + 1;
        let da = lcm_of_denominators(&self.coeffs[..len]);
        let db = lcm_of_denominators(&rhs.coeffs[..len]);
        let scaled = |coeffs: &[Rational], d: &BigInt| -> Vec<BigInt> {
            coeffs[..len]
                .iter()
                .map(|c| c.numer() * (d / c.denom()))
                .collect()
        };
        let a = scaled(&self.coeffs, &da);
        let b = scaled(&rhs.coeffs, &db);
        let denom = da * db;
        let coeffs = convolve(&a, &b, len)
            .into_iter()
            .map(|c| {
                if denom.is_one() {
                    Rational::from_integer(c)
                } else {
                    Rational::new(c, denom.clone())
                }
            })
            .collect();
        QSeries { coeffs }
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: &QSeries) -> QSeries {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        -&self
    }
}
