//! Generalized MacMahon functions
//!
//! `A_{S,N,ε,k}(q) = Σ_{0<m₁<…<m_k, m_i ∈ S} ε^k q^{Σm_i} / Π(1 - εq^{m_i})²`
//!
//! computed three ways: as the `t^k` coefficient of `Π_{m ∈ S} (1 + t·F_m)`
//! with `F_m = εq^m/(1-εq^m)² = Σ_d d ε^d q^{md}`, by exhaustive enumeration of
//! the `(m_i, d_i)` configurations, and through `Λ_k` evaluated at the
//! Eisenstein series `G_{S,N,ε,2j}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::eisenstein::eisenstein_g;
use crate::lehmer::{evaluate_at_series, lehmer_polynomials};
use crate::numtheory::{ResidueClassSet, SignEps};
use crate::qseries::{QSeries, SeriesCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacMahonError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("unknown variant {0:?}; expected one of A..H")]
    UnknownVariant(String),
}

/// The data `(S, N, ε, k)` of one generalized MacMahon function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MacMahonParams {
    pub classes: ResidueClassSet,
    pub eps: SignEps,
    pub k: usize,
}

impl MacMahonParams {
    pub fn new(classes: ResidueClassSet, eps: SignEps, k: usize) -> Result<Self, MacMahonError> {
        if k == 0 {
            return Err(MacMahonError::ZeroK);
        }
        Ok(Self { classes, eps, k })
    }

    /// Smallest `n` with a possibly nonzero coefficient: the sum of the `k`
    /// smallest admissible parts.
    pub fn min_weight(&self) -> u64 {
        let mut m = 0;
        let mut total = 0;
        for _ in 0..self.k {
            m = self.classes.next_after(m);
            total += m;
        }
        total
    }
}

impl fmt::Display for MacMahonParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S={}, eps={}, k={}", self.classes, self.eps, self.k)
    }
}

/// MacMahon's eight named families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::A,
        Variant::B,
        Variant::C,
        Variant::D,
        Variant::E,
        Variant::F,
        Variant::G,
        Variant::H,
    ];

    /// `(N, S, ε)` of the underlying generalized function.
    pub fn data(self) -> (u64, &'static [u64], SignEps) {
        match self {
            Variant::A => (1, &[0], SignEps::Plus),
            Variant::B => (1, &[0], SignEps::Minus),
            Variant::C => (2, &[1], SignEps::Plus),
            Variant::D => (2, &[1], SignEps::Minus),
            Variant::E => (5, &[1, 4], SignEps::Plus),
            Variant::F => (5, &[1, 4], SignEps::Minus),
            Variant::G => (5, &[2, 3], SignEps::Plus),
            Variant::H => (5, &[2, 3], SignEps::Minus),
        }
    }

    pub fn params(self, k: usize) -> Result<MacMahonParams, MacMahonError> {
        let (modulus, residues, eps) = self.data();
        let classes = ResidueClassSet::new(modulus, residues.iter().copied())
            .expect("variant residue sets are valid");
        MacMahonParams::new(classes, eps, k)
    }

    /// The variant equals `sign(k)·A_{S,N,ε,k}`; the ε = -1 families carry `(-1)^k`.
    pub fn sign(self, k: usize) -> i64 {
        match self.data().2 {
            SignEps::Minus if k % 2 == 1 => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Variant {
    type Err = MacMahonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Variant::A),
            "B" => Ok(Variant::B),
            "C" => Ok(Variant::C),
            "D" => Ok(Variant::D),
            "E" => Ok(Variant::E),
            "F" => Ok(Variant::F),
            "G" => Ok(Variant::G),
            "H" => Ok(Variant::H),
            _ => Err(MacMahonError::UnknownVariant(s.to_string())),
        }
    }
}

/// Integer coefficients of `A_{S,N,ε,j}` for `j = 1..=kmax`, each through `q^order`.
pub fn macmahon_coefficients(
    classes: &ResidueClassSet,
    eps: SignEps,
    kmax: usize,
    order: usize,
) -> Vec<Vec<BigInt>> {
    match product_i128(classes, eps, kmax, order) {
        Some(rows) => rows
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect(),
        None => product_big(classes, eps, kmax, order),
    }
}

fn admissible(classes: &ResidueClassSet, order: usize) -> Vec<usize> {
    (1..=order).filter(|&m| classes.contains(m as u64)).collect()
}

fn sign_of(eps: SignEps, d: usize) -> i64 {
    eps.pow(d as u64)
}

// p[j] holds the t^j coefficient; p[0] = 1 is implicit.
fn product_i128(
    classes: &ResidueClassSet,
    eps: SignEps,
    kmax: usize,
    order: usize,
) -> Option<Vec<Vec<i128>>> {
    let mut p = vec![vec![0i128; order + 1]; kmax + 1];
    p[0][0] = 1;
    for m in admissible(classes, order) {
        for j in (1..=kmax).rev() {
            let (lower, upper) = p.split_at_mut(j);
            let src = &lower[j - 1];
            let dst = &mut upper[0];
            for (n0, &a) in src.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut d = 1usize;
                while n0 + m * d <= order {
                    let w = a.checked_mul((d as i128) * sign_of(eps, d) as i128)?;
                    let slot = &mut dst[n0 + m * d];
                    *slot = slot.checked_add(w)?;
                    d += 1;
                }
            }
        }
    }
    p.remove(0);
    Some(p)
}

fn product_big(
    classes: &ResidueClassSet,
    eps: SignEps,
    kmax: usize,
    order: usize,
) -> Vec<Vec<BigInt>> {
    let mut p = vec![vec![BigInt::zero(); order + 1]; kmax + 1];
    p[0][0] = BigInt::from(1);
    for m in admissible(classes, order) {
        for j in (1..=kmax).rev() {
            let (lower, upper) = p.split_at_mut(j);
            let src = &lower[j - 1];
            let dst = &mut upper[0];
            for (n0, a) in src.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut d = 1usize;
                while n0 + m * d <= order {
                    dst[n0 + m * d] += a * BigInt::from(d as i64 * sign_of(eps, d));
                    d += 1;
                }
            }
        }
    }
    p.remove(0);
    p
}

/// `A_{S,N,ε,j}(q)` for `j = 1..=kmax` from one pass of the product.
pub fn macmahon_series_all(
    classes: &ResidueClassSet,
    eps: SignEps,
    kmax: usize,
    order: usize,
) -> Vec<QSeries> {
    macmahon_coefficients(classes, eps, kmax, order)
        .into_iter()
        .map(QSeries::from_integers)
        .collect()
}

/// `A_{S,N,ε,k}(q)` through `q^order` by direct expansion of the product.
pub fn macmahon_series(p: &MacMahonParams, order: usize) -> QSeries {
    macmahon_series_all(&p.classes, p.eps, p.k, order)
        .pop()
        .expect("k ≥ 1")
}

/// A named variant `A_k(q), …, H_k(q)`, sign included.
pub fn variant_series(v: Variant, k: usize, order: usize) -> Result<QSeries, MacMahonError> {
    let p = v.params(k)?;
    Ok(macmahon_series(&p, order).scale_int(v.sign(k)))
}

/// Coefficient of `q^n` by enumerating `m₁ < … < m_k` in `S` and heights
/// `d_i ≥ 1` with `Σ m_i d_i = n`, each weighted by `Π d_i ε^{d_i}`.
pub fn macmahon_bruteforce(p: &MacMahonParams, n: u64) -> BigInt {
    fn go(classes: &ResidueClassSet, eps: SignEps, after: u64, rest: u64, parts: usize) -> BigInt {
        if parts == 0 {
            return if rest == 0 { BigInt::from(1) } else { BigInt::zero() };
        }
        let mut total = BigInt::zero();
        let mut m = classes.next_after(after);
        loop {
            // smallest completion uses d = 1 on m and the next parts - 1 classes
            let mut need = m;
            let mut next = m;
            for _ in 1..parts {
                next = classes.next_after(next);
                need += next;
            }
            if need > rest {
                break;
            }
            let mut d = 1;
            while m * d <= rest {
                let sub = go(classes, eps, m, rest - m * d, parts - 1);
                if !sub.is_zero() {
                    total += sub * BigInt::from(d as i64 * eps.pow(d));
                }
                d += 1;
            }
            m = classes.next_after(m);
        }
        total
    }
    go(&p.classes, p.eps, 0, n, p.k)
}

/// Both sides of `A_{S,N,ε,k} = Λ_k(G_{S,N,ε,2}, …, G_{S,N,ε,2k})`: the direct
/// product expansion and the Lehmer polynomial at Eisenstein series.
pub fn main_identity_sides(p: &MacMahonParams, order: usize) -> (QSeries, QSeries) {
    let direct = macmahon_series(p, order);
    let lambda = lehmer_polynomials(p.k).pop().expect("k ≥ 1");
    let args: BTreeMap<u32, QSeries> = (1..=p.k)
        .map(|j| (2 * j as u32, eisenstein_g(&p.classes, p.eps, 2 * j as u32, order)))
        .collect();
    let via_lehmer = evaluate_at_series(&lambda, &args).expect("all variables bound");
    (direct, via_lehmer)
}

pub fn verify_main_identity(p: &MacMahonParams, order: usize) -> SeriesCheck {
    let (direct, via_lehmer) = main_identity_sides(p, order);
    SeriesCheck::compare(format!("A[{p}] = Lambda_{}(G)", p.k), &direct, &via_lehmer)
}

/// The identity for a named variant, with the variant's sign on both sides.
pub fn verify_variant(v: Variant, k: usize, order: usize) -> Result<SeriesCheck, MacMahonError> {
    let p = v.params(k)?;
    let (direct, via_lehmer) = main_identity_sides(&p, order);
    let s = v.sign(k);
    Ok(SeriesCheck::compare(
        format!("{v}_{k} = Lambda_{k}(G)"),
        &direct.scale_int(s),
        &via_lehmer.scale_int(s),
    ))
}
