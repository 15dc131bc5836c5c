//! Integer number theory used throughout the crate: residue-class sets,
//! the constrained divisor sums behind every Eisenstein-type series,
//! primality, the Möbius function and Bernoulli numbers.
//!
//! Divisor sums are computed by trial-division enumeration of divisors so that
//! every constrained variant shares one code path.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("argument must be a positive integer, got {0}")]
    NonPositive(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue set must be non-empty")]
    EmptyResidues,
    #[error("residue {residue} is not reduced modulo {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("Bernoulli number B_{0} requested for odd index > 1")]
    OddBernoulli(u32),
    #[error("cannot parse sign {0:?}; expected +1 or -1")]
    BadSign(String),
}

/// A modulus `N` together with a non-empty set `S` of residues mod `N`.
///
/// Residues are kept sorted and deduplicated; every entry is `< N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClassSet {
    modulus: u64,
    residues: Vec<u64>,
}

impl ResidueClassSet {
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, NumTheoryError> {
        if modulus == 0 {
            return Err(NumTheoryError::ZeroModulus);
        }
        let mut residues: Vec<u64> = residues.into_iter().collect();
        if residues.is_empty() {
            return Err(NumTheoryError::EmptyResidues);
        }
        if let Some(&residue) = residues.iter().find(|&&r| r >= modulus) {
            return Err(NumTheoryError::ResidueOutOfRange { residue, modulus });
        }
        residues.sort_unstable();
        residues.dedup();
        Ok(Self { modulus, residues })
    }

    /// `{0}` modulo 1, i.e. every positive integer.
    pub fn all() -> Self {
        Self { modulus: 1, residues: vec![0] }
    }

    /// The residues coprime to `modulus`. For `modulus = 1` this is `{0}`.
    pub fn units(modulus: u64) -> Result<Self, NumTheoryError> {
        if modulus == 0 {
            return Err(NumTheoryError::ZeroModulus);
        }
        Self::new(modulus, (0..modulus).filter(|r| r.gcd(&modulus) == 1))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Whether the image of `m` in `Z/NZ` lies in the set.
    pub fn contains(&self, m: u64) -> bool {
        self.residues.binary_search(&(m % self.modulus)).is_ok()
    }

    /// True iff `l ∈ S` implies `-l ∈ S`.
    pub fn symmetric(&self) -> bool {
        self.residues
            .iter()
            .all(|&l| self.contains((self.modulus - l) % self.modulus))
    }

    /// Smallest positive integer strictly greater than `m` whose class lies in the set.
    pub fn next_after(&self, m: u64) -> u64 {
        let mut c = m + 1;
        while !self.contains(c) {
            c += 1;
        }
        c
    }
}

impl fmt::Display for ResidueClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}} mod {}", list.join(","), self.modulus)
    }
}

/// The sign twist `ε ∈ {+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignEps {
    Plus,
    Minus,
}

impl SignEps {
    pub fn value(self) -> i64 {
        match self {
            SignEps::Plus => 1,
            SignEps::Minus => -1,
        }
    }

    /// `ε^d`.
    pub fn pow(self, d: u64) -> i64 {
        match self {
            SignEps::Minus if d % 2 == 1 => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for SignEps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignEps::Plus => "+1",
            SignEps::Minus => "-1",
        })
    }
}

impl FromStr for SignEps {
    type Err = NumTheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(SignEps::Plus),
            "-1" | "-" => Ok(SignEps::Minus),
            other => Err(NumTheoryError::BadSign(other.to_string())),
        }
    }
}

/// All positive divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `σ_{S,N,ε,k}(n) = Σ_{d | n, n/d ∈ S} ε^d d^k`.
pub fn divisor_sum_general(
    classes: &ResidueClassSet,
    eps: SignEps,
    k: u32,
    n: u64,
) -> Result<BigInt, NumTheoryError> {
    if n == 0 {
        return Err(NumTheoryError::NonPositive(n));
    }
    let mut total = BigInt::zero();
    for d in divisors(n) {
        if classes.contains(n / d) {
            let term = BigInt::from(d).pow(k);
            if eps.pow(d) < 0 {
                total -= term;
            } else {
                total += term;
            }
        }
    }
    Ok(total)
}

/// `σ_k(n)`.
pub fn sigma(k: u32, n: u64) -> Result<BigInt, NumTheoryError> {
    divisor_sum_general(&ResidueClassSet::all(), SignEps::Plus, k, n)
}

/// Level-2 divisor sum `σ_k^{(2)}(n)`: divisors `d` with `n/d` odd.
pub fn sigma_level2(k: u32, n: u64) -> Result<BigInt, NumTheoryError> {
    let odd = ResidueClassSet::new(2, [1]).expect("static residue set");
    divisor_sum_general(&odd, SignEps::Plus, k, n)
}

/// `σ_k^{(a,N)}(n)`: `σ_k(n)` when `n ≡ a (mod N)`, otherwise 0.
pub fn sigma_gated(k: u32, a: u64, modulus: u64, n: u64) -> Result<BigInt, NumTheoryError> {
    if modulus == 0 {
        return Err(NumTheoryError::ZeroModulus);
    }
    if n % modulus == a % modulus {
        sigma(k, n)
    } else if n == 0 {
        Err(NumTheoryError::NonPositive(n))
    } else {
        Ok(BigInt::zero())
    }
}

/// `Σ_{d | n, gcd(n/d, N) = 1} d^e`.
pub fn coprime_divisor_sum(modulus: u64, e: u32, n: u64) -> Result<BigInt, NumTheoryError> {
    divisor_sum_general(&ResidueClassSet::units(modulus)?, SignEps::Plus, e, n)
}

/// Primality by trial division up to `√n`.
///
/// Adequate for the desk-scale ranges used here (n ≤ 10⁷); a deterministic
/// strong-pseudoprime test can replace it if the ranges grow.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Distinct prime factors of `n` (n ≥ 1) in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function.
pub fn moebius(n: u64) -> Result<i8, NumTheoryError> {
    if n == 0 {
        return Err(NumTheoryError::NonPositive(n));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Whether `n` is `base^l` for some `l ≥ 1`, by repeated exact division.
pub fn is_power_of(n: u64, base: u64) -> bool {
    if n < base || base < 2 {
        return false;
    }
    let mut m = n;
    while m % base == 0 {
        m /= base;
    }
    m == 1
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Bernoulli numbers `B_0..=B_max` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(max: u32) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(max as usize + 1);
    table.push(Rational::one());
    for m in 1..=max as u64 {
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j as u64)) * b;
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

/// Exact Bernoulli number `B_k`; odd `k > 1` is rejected (those vanish and
/// are never needed).
pub fn bernoulli(k: u32) -> Result<Rational, NumTheoryError> {
    if k > 1 && k % 2 == 1 {
        return Err(NumTheoryError::OddBernoulli(k));
    }
    Ok(bernoulli_table(k).pop().expect("table has k+1 entries"))
}
