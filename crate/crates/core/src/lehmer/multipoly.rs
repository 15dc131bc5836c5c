//! Sparse multivariate polynomials over the rationals in the even-indexed
//! variables `x₂, x₄, x₆, …`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Exponent vector; entry `j` is the power of `x_{2(j+1)}`. Trailing zeros
/// are trimmed so equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    /// The monomial `x_var` for an even `var ≥ 2`.
    pub fn var(var: u32) -> Self {
        Self::from_powers([(var, 1)])
    }

    /// Builds `Π x_var^e` from `(var, e)` pairs; `var` must be even and ≥ 2.
    pub fn from_powers(powers: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut exps = Vec::new();
        for (var, e) in powers {
            assert!(var >= 2 && var % 2 == 0, "variables are x_2, x_4, ...; got x_{var}");
            let j = (var / 2 - 1) as usize;
            if exps.len() <= j {
                exps.resize(j + 1, 0);
            }
            exps[j] += e;
        }
        let mut m = Self(exps);
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    /// Exponent of `x_var`.
    pub fn exponent(&self, var: u32) -> u32 {
        let j = (var / 2).saturating_sub(1) as usize;
        self.0.get(j).copied().unwrap_or(0)
    }

    /// `(var, exponent)` for every variable that occurs.
    pub fn powers(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| (2 * (j as u32 + 1), e))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weight with `x_{2j}` of weight `2j`.
    pub fn weight(&self) -> u32 {
        self.powers().map(|(v, e)| v * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len)
            .map(|j| self.0.get(j).unwrap_or(&0) + other.0.get(j).unwrap_or(&0))
            .collect();
        Monomial(exps)
    }

    /// Graded lexicographic order with `x₂ > x₄ > …`, largest first.
    pub fn grlex_desc(&self, other: &Monomial) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| {
                let len = self.0.len().max(other.0.len());
                (0..len)
                    .map(|j| {
                        let a = self.0.get(j).unwrap_or(&0);
                        let b = other.0.get(j).unwrap_or(&0);
                        b.cmp(a)
                    })
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .powers()
            .map(|(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Polynomial in `x₂, x₄, …` with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(var: u32) -> Self {
        Self::term(Rational::one(), Monomial::var(var))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// The even indices of all variables that occur.
    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().map(|(v, _)| v).collect::<Vec<_>>())
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (x * c, m.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitutes `x_v ↦ factor(v)·x_v` for every variable.
    pub fn rescale_variables(&self, factor: impl Fn(u32) -> Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let k = m
                .powers()
                .fold(Rational::one(), |acc, (v, e)| acc * num_traits::pow(factor(v), e as usize));
            (c * k, m.clone())
        }))
    }

    /// Exact evaluation at rational points; `None` if a variable is unbound.
    pub fn eval(&self, at: impl Fn(u32) -> Option<Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                t *= num_traits::pow(at(v)?, e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Terms sorted by descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.grlex_desc(b.0));
        v
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// Renders with the common denominator factored out, terms in graded-lex
/// order, e.g. `1/12 * (6*x2^2 + x2 - x4)`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let denom = self.common_denominator();
        let mut body = String::new();
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let scaled = (c * Rational::from_integer(denom.clone())).to_integer();
            let negative = scaled.is_negative();
            let mag = scaled.abs();
            match (i, negative) {
                (0, true) => body.push('-'),
                (0, false) => {}
                (_, true) => body.push_str(" - "),
                (_, false) => body.push_str(" + "),
            }
            if m.is_one() {
                body.push_str(&mag.to_string());
            } else if mag.is_one() {
                body.push_str(&m.to_string());
            } else {
                body.push_str(&format!("{mag}*{m}"));
            }
        }
        if denom.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "1/{denom} * ({body})")
        }
    }
}
