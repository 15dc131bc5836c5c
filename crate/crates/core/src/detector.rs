//! Prime-detecting sign expressions.
//!
//! Each [`ExpressionId`] names an integer-valued expression in `n` whose sign
//! follows a trichotomy: zero on (some) primes, negative on a thin exceptional
//! set, positive otherwise. [`Evaluator`] computes the value with either the
//! closed divisor-sum formulas or an independent brute-force route and
//! compares the sign with the predicted one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::eisenstein::{coprime_g, eisenstein_g, level2_macmahon_formula};
use crate::lattice::{lattice_count_formula, norm_counts, LatticeName, ShiftedLattice};
use crate::lehmer::{evaluate_at_series, lehmer_polynomials};
use crate::macmahon::{macmahon_bruteforce, macmahon_coefficients, macmahon_series_all, MacMahonParams};
use crate::numtheory::{
    divisor_sum_general, divisors, is_power_of, is_prime, prime_factors, sigma,
    sigma_gated, ResidueClassSet, SignEps,
};
use crate::qseries::{QSeries, SeriesCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectorError {
    #[error("expressions are defined for n ≥ 2, got {0}")]
    NTooSmall(u64),
    #[error("Lelièvre's criteria need l > k ≥ 1, got k = {k}, l = {l}")]
    BadExponents { k: u32, l: u32 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("n = {n} lies beyond the precomputed range {hi}")]
    OutOfRange { n: u64, hi: u64 },
    #[error("empty or reversed range {lo}:{hi}")]
    BadRange { lo: u64, hi: u64 },
    #[error("unknown expression {0:?}")]
    UnknownExpression(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &BigInt) -> Self {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

/// A sign together with what the trichotomy says it means for this expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignOutcome {
    pub sign: Sign,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpressionId {
    /// `(n²-3n+2)M₁ - 8M₂`
    Level1Quadratic,
    /// `(3n³-13n²+18n-8)M₁ + (12n²-120n+212)M₂ - 960M₃`
    Level1Cubic,
    /// `(n²-4n+3)M₁⁽²⁾ - 24M₂⁽²⁾`
    Level2Quadratic,
    /// `(n⁴-n³-14n²+29n-15)M₁⁽²⁾ - 120(3n-8)M₂⁽²⁾ - 5760M₃⁽²⁾`
    Level2Quartic,
    /// `(n²-3n+2)M₁⁽³⁾ - 12M₂⁽³⁾`
    Level3Quadratic,
    /// `60(n²-n+1)r_{L₁}(n) - r_{E₈}(2n)`
    Lattice1Mod4,
    /// `60(n²-n+1)r_{L₂}(n) - r_{E₈}(2n)`
    Lattice3Mod4,
    /// `n`-th coefficient of `(D^l+1)G_{k+1}^{(N)} - (D^k+1)G_{l+1}^{(N)}`
    LelievreGeneral { modulus: u64, k: u32, l: u32 },
}

impl ExpressionId {
    pub const NAMED: [ExpressionId; 7] = [
        ExpressionId::Level1Quadratic,
        ExpressionId::Level1Cubic,
        ExpressionId::Level2Quadratic,
        ExpressionId::Level2Quartic,
        ExpressionId::Level3Quadratic,
        ExpressionId::Lattice1Mod4,
        ExpressionId::Lattice3Mod4,
    ];

    pub fn lelievre(modulus: u64, k: u32, l: u32) -> Result<Self, DetectorError> {
        if modulus == 0 {
            return Err(DetectorError::ZeroModulus);
        }
        if k == 0 || l <= k {
            return Err(DetectorError::BadExponents { k, l });
        }
        Ok(ExpressionId::LelievreGeneral { modulus, k, l })
    }

    /// The sign the trichotomy predicts at `n ≥ 2`, with its meaning.
    pub fn expected(self, n: u64) -> SignOutcome {
        let (sign, label) = match self {
            ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic => {
                if is_prime(n) {
                    (Sign::Zero, "prime")
                } else {
                    (Sign::Positive, "composite")
                }
            }
            ExpressionId::Level2Quadratic | ExpressionId::Level2Quartic => {
                if is_prime(n) && n != 2 {
                    (Sign::Zero, "odd prime")
                } else if is_power_of(n, 2) {
                    (Sign::Negative, "power of 2")
                } else {
                    (Sign::Positive, "otherwise")
                }
            }
            ExpressionId::Level3Quadratic => {
                if is_prime(n) && n != 3 {
                    (Sign::Zero, "prime other than 3")
                } else if is_power_of(n, 3) {
                    (Sign::Negative, "power of 3")
                } else {
                    (Sign::Positive, "otherwise")
                }
            }
            ExpressionId::Lattice1Mod4 | ExpressionId::Lattice3Mod4 => {
                let a = if self == ExpressionId::Lattice1Mod4 { 1 } else { 3 };
                if n % 4 != a {
                    (Sign::Negative, if a == 1 { "n not 1 mod 4" } else { "n not 3 mod 4" })
                } else if is_prime(n) {
                    (Sign::Zero, if a == 1 { "prime, 1 mod 4" } else { "prime, 3 mod 4" })
                } else {
                    (Sign::Positive, "otherwise")
                }
            }
            ExpressionId::LelievreGeneral { modulus, .. } => {
                if is_prime(n) && modulus % n != 0 {
                    (Sign::Zero, "prime not dividing N")
                } else if prime_factors(n).iter().all(|p| modulus % p == 0) {
                    (Sign::Negative, "every prime factor divides N")
                } else {
                    (Sign::Positive, "otherwise")
                }
            }
        };
        SignOutcome {
            sign,
            label: label.to_string(),
        }
    }
}

impl fmt::Display for ExpressionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpressionId::Level1Quadratic => f.write_str("level1-quadratic"),
            ExpressionId::Level1Cubic => f.write_str("level1-cubic"),
            ExpressionId::Level2Quadratic => f.write_str("level2-quadratic"),
            ExpressionId::Level2Quartic => f.write_str("level2-quartic"),
            ExpressionId::Level3Quadratic => f.write_str("level3-quadratic"),
            ExpressionId::Lattice1Mod4 => f.write_str("lattice1-mod4"),
            ExpressionId::Lattice3Mod4 => f.write_str("lattice3-mod4"),
            ExpressionId::LelievreGeneral { modulus, k, l } => write!(f, "lelievre:{modulus}:{k}:{l}"),
        }
    }
}

impl FromStr for ExpressionId {
    type Err = DetectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DetectorError::UnknownExpression(s.to_string());
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("lelievre:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let modulus = parts[0].parse().map_err(|_| bad())?;
            let k = parts[1].parse().map_err(|_| bad())?;
            let l = parts[2].parse().map_err(|_| bad())?;
            return ExpressionId::lelievre(modulus, k, l);
        }
        ExpressionId::NAMED
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(bad)
    }
}

/// How the `M_k` values, lattice counts and Lelièvre coefficients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Closed divisor-sum formulas; level-1 `M₂, M₃` and level-3 `M₂` from series.
    Formula,
    /// Configuration enumeration, lattice enumeration and the `D`-operator series.
    BruteForce,
}

impl FromStr for Backend {
    type Err = DetectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "formula" => Ok(Backend::Formula),
            "brute-force" | "bruteforce" | "brute" => Ok(Backend::BruteForce),
            _ => Err(DetectorError::UnknownExpression(s.to_string())),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Formula => "formula",
            Backend::BruteForce => "brute-force",
        })
    }
}

/// `Σ_{d | n, gcd(n/d, N) = 1} ((n^l + 1) d^k - (n^k + 1) d^l)`.
pub fn lelievre_coeff(modulus: u64, k: u32, l: u32, n: u64) -> Result<BigInt, DetectorError> {
    ExpressionId::lelievre(modulus, k, l)?;
    if n == 0 {
        return Err(DetectorError::NTooSmall(n));
    }
    let nb = BigInt::from(n);
    let nl1: BigInt = Pow::pow(&nb, l) + 1;
    let nk1: BigInt = Pow::pow(&nb, k) + 1;
    let mut total = BigInt::zero();
    for d in divisors(n) {
        if num_integer::gcd(n / d, modulus) == 1 {
            let db = BigInt::from(d);
            total += &nl1 * Pow::pow(&db, k) - &nk1 * Pow::pow(&db, l);
        }
    }
    Ok(total)
}

pub fn classify_lelievre(modulus: u64, k: u32, l: u32, n: u64) -> Result<SignOutcome, DetectorError> {
    if n < 2 {
        return Err(DetectorError::NTooSmall(n));
    }
    let id = ExpressionId::lelievre(modulus, k, l)?;
    Ok(outcome(id, Sign::of(&lelievre_coeff(modulus, k, l, n)?)))
}

/// Labels a computed sign with the meaning the trichotomy attaches to it.
fn outcome(id: ExpressionId, sign: Sign) -> SignOutcome {
    let label = match (id, sign) {
        (ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic, Sign::Zero) => "prime",
        (ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic, Sign::Positive) => "composite",
        (ExpressionId::Level2Quadratic | ExpressionId::Level2Quartic, Sign::Zero) => "odd prime",
        (ExpressionId::Level2Quadratic | ExpressionId::Level2Quartic, Sign::Negative) => "power of 2",
        (ExpressionId::Level3Quadratic, Sign::Zero) => "prime other than 3",
        (ExpressionId::Level3Quadratic, Sign::Negative) => "power of 3",
        (ExpressionId::Lattice1Mod4, Sign::Zero) => "prime, 1 mod 4",
        (ExpressionId::Lattice1Mod4, Sign::Negative) => "n not 1 mod 4",
        (ExpressionId::Lattice3Mod4, Sign::Zero) => "prime, 3 mod 4",
        (ExpressionId::Lattice3Mod4, Sign::Negative) => "n not 3 mod 4",
        (ExpressionId::LelievreGeneral { .. }, Sign::Zero) => "prime not dividing N",
        (ExpressionId::LelievreGeneral { .. }, Sign::Negative) => "every prime factor divides N",
        (ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic, Sign::Negative) => "outside the theorem",
        (_, Sign::Positive) => "otherwise",
    };
    SignOutcome {
        sign,
        label: label.to_string(),
    }
}

/// Coefficients of `(D^l + 1) G_{k+1}^{(N)} - (D^k + 1) G_{l+1}^{(N)}`.
pub fn lelievre_series(modulus: u64, k: u32, l: u32, order: usize) -> QSeries {
    let op = |e: u32| {
        let mut p = vec![0i64; e as usize + 1];
        p[0] += 1;
        p[e as usize] += 1;
        p
    };
    let a = coprime_g(modulus, k + 1, order).apply_d_polynomial(&op(l));
    let b = coprime_g(modulus, l + 1, order).apply_d_polynomial(&op(k));
    &a - &b
}

/// `f_{1,3}^{(2)} = (D+1)((D²-4D+3)C₁ - 24C₂)` and
/// `f_{1,5}^{(2)} = (D+1)((D⁴-D³-14D²+29D-15)C₁ - 120(3D-8)C₂ - 5760C₃)`.
pub fn level2_factorization_checks(order: usize) -> Vec<SeriesCheck> {
    let odd = ResidueClassSet::new(2, [1]).expect("static");
    let c = macmahon_series_all(&odd, SignEps::Plus, 3, order);
    let f13 = &c[0].apply_d_polynomial(&[3, -4, 1]) - &c[1].scale_int(24);
    let f15 = &(&c[0].apply_d_polynomial(&[-15, 29, -14, -1, 1]) - &c[1].apply_d_polynomial(&[-8, 3]).scale_int(120))
        - &c[2].scale_int(5760);
    vec![
        SeriesCheck::compare(
            "f13(2) = (D+1)((D^2-4D+3)C1 - 24C2)",
            &lelievre_series(2, 1, 3, order),
            &f13.apply_d_polynomial(&[1, 1]),
        ),
        SeriesCheck::compare(
            "f15(2) = (D+1)((D^4-D^3-14D^2+29D-15)C1 - 120(3D-8)C2 - 5760C3)",
            &lelievre_series(2, 1, 5, order),
            &f15.apply_d_polynomial(&[1, 1]),
        ),
    ]
}

/// `(n³+1)σ₁^{(a,4)}(n) - (n+1)σ₃(n)`, the lattice expression divided by `240/(n+1)`.
pub fn lattice_reduced_form(a: u64, n: u64) -> BigInt {
    let nb = BigInt::from(n);
    (Pow::pow(&nb, 3u32) + 1) * sigma_gated(1, a, 4, n).expect("n ≥ 1") - (nb + 1) * sigma(3, n).expect("n ≥ 1")
}

/// One evaluated row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub n: u64,
    pub value: BigInt,
    pub outcome: SignOutcome,
    pub expected: SignOutcome,
}

impl Evaluation {
    pub fn consistent(&self) -> bool {
        self.outcome.sign == self.expected.sign
    }
}

/// Tables shared by every `n` up to `hi` for one expression and backend.
#[derive(Debug, Clone)]
pub struct Evaluator {
    id: ExpressionId,
    backend: Backend,
    hi: u64,
    /// Level-1 `[M₂, M₃]` or level-3 `[M₂]` coefficients.
    macmahon: Vec<Vec<BigInt>>,
    /// Lattice counts `r_L(0..=hi)` and `r_{E₈}(0..=2hi)`.
    lattice: Option<(Vec<u64>, Vec<u64>)>,
    lelievre: Option<QSeries>,
}

fn level3_classes() -> ResidueClassSet {
    ResidueClassSet::new(3, [1, 2]).expect("static")
}

/// `M₂⁽³⁾ = Λ₂(G₂, G₄)` at the level-3 series, through `q^order`.
fn level3_m2_series(order: usize) -> Vec<BigInt> {
    let s = level3_classes();
    let lambda2 = lehmer_polynomials(2).pop().expect("k = 2");
    let args = [(2, eisenstein_g(&s, SignEps::Plus, 2, order)), (4, eisenstein_g(&s, SignEps::Plus, 4, order))]
        .into_iter()
        .collect();
    evaluate_at_series(&lambda2, &args)
        .expect("x2 and x4 bound")
        .integer_coeffs()
        .expect("MacMahon coefficients are integers")
}

impl Evaluator {
    pub fn new(id: ExpressionId, backend: Backend, hi: u64) -> Self {
        let order = hi as usize;
        let mut ev = Self {
            id,
            backend,
            hi,
            macmahon: Vec::new(),
            lattice: None,
            lelievre: None,
        };
        match (id, backend) {
            (ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic, Backend::Formula) => {
                let kmax = if id == ExpressionId::Level1Quadratic { 2 } else { 3 };
                ev.macmahon = macmahon_coefficients(&ResidueClassSet::all(), SignEps::Plus, kmax, order)
                    .into_iter()
                    .skip(1)
                    .collect();
            }
            (ExpressionId::Level3Quadratic, Backend::Formula) => {
                ev.macmahon = vec![level3_m2_series(order)];
            }
            (ExpressionId::Lattice1Mod4 | ExpressionId::Lattice3Mod4, Backend::BruteForce) => {
                let name = if id == ExpressionId::Lattice1Mod4 { LatticeName::L1 } else { LatticeName::L2 };
                let r = norm_counts(&ShiftedLattice::catalog(name), hi).expect("bounded norm");
                let e8 = norm_counts(&ShiftedLattice::catalog(LatticeName::E8), 2 * hi).expect("bounded norm");
                ev.lattice = Some((r, e8));
            }
            (ExpressionId::LelievreGeneral { modulus, k, l }, Backend::BruteForce) => {
                ev.lelievre = Some(lelievre_series(modulus, k, l, order));
            }
            _ => {}
        }
        ev
    }

    pub fn id(&self) -> ExpressionId {
        self.id
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    fn m(&self, modulus: u64, residues: &[u64], k: usize, n: u64) -> BigInt {
        let classes = ResidueClassSet::new(modulus, residues.iter().copied()).expect("static");
        let p = MacMahonParams::new(classes, SignEps::Plus, k).expect("k ≥ 1");
        macmahon_bruteforce(&p, n)
    }

    pub fn value(&self, n: u64) -> Result<BigInt, DetectorError> {
        if n < 2 {
            return Err(DetectorError::NTooSmall(n));
        }
        let needs_table = match (self.id, self.backend) {
            (ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic | ExpressionId::Level3Quadratic, Backend::Formula) => true,
            (ExpressionId::Lattice1Mod4 | ExpressionId::Lattice3Mod4 | ExpressionId::LelievreGeneral { .. }, Backend::BruteForce) => true,
            _ => false,
        };
        if needs_table && n > self.hi {
            return Err(DetectorError::OutOfRange { n, hi: self.hi });
        }
        let nb = BigInt::from(n);
        let i = |x: i64| BigInt::from(x);
        let poly = |cs: &[i64]| cs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * &nb + c);
        let brute = self.backend == Backend::BruteForce;
        let idx = n as usize;
        Ok(match self.id {
            ExpressionId::Level1Quadratic | ExpressionId::Level1Cubic => {
                let (m1, m2, m3) = if brute {
                    let m3 = if self.id == ExpressionId::Level1Cubic { self.m(1, &[0], 3, n) } else { BigInt::zero() };
                    (self.m(1, &[0], 1, n), self.m(1, &[0], 2, n), m3)
                } else {
                    let m3 = self.macmahon.get(1).map(|v| v[idx].clone()).unwrap_or_default();
                    (sigma(1, n).expect("n ≥ 1"), self.macmahon[0][idx].clone(), m3)
                };
                if self.id == ExpressionId::Level1Quadratic {
                    poly(&[2, -3, 1]) * m1 - i(8) * m2
                } else {
                    poly(&[-8, 18, -13, 3]) * m1 + poly(&[212, -120, 12]) * m2 - i(960) * m3
                }
            }
            ExpressionId::Level2Quadratic | ExpressionId::Level2Quartic => {
                let m = |k: usize| if brute { self.m(2, &[1], k, n) } else { level2_macmahon_formula(k, n) };
                if self.id == ExpressionId::Level2Quadratic {
                    poly(&[3, -4, 1]) * m(1) - i(24) * m(2)
                } else {
                    poly(&[-15, 29, -14, -1, 1]) * m(1) - i(120) * poly(&[-8, 3]) * m(2) - i(5760) * m(3)
                }
            }
            ExpressionId::Level3Quadratic => {
                let (m1, m2) = if brute {
                    (self.m(3, &[1, 2], 1, n), self.m(3, &[1, 2], 2, n))
                } else {
                    let m1 = divisor_sum_general(&level3_classes(), SignEps::Plus, 1, n).expect("n ≥ 1");
                    (m1, self.macmahon[0][idx].clone())
                };
                poly(&[2, -3, 1]) * m1 - i(12) * m2
            }
            ExpressionId::Lattice1Mod4 | ExpressionId::Lattice3Mod4 => {
                let (r, e8) = match &self.lattice {
                    Some((r, e8)) => (BigInt::from(r[idx]), BigInt::from(e8[2 * idx])),
                    None => {
                        let name = if self.id == ExpressionId::Lattice1Mod4 { LatticeName::L1 } else { LatticeName::L2 };
                        (lattice_count_formula(name, n), lattice_count_formula(LatticeName::E8, n))
                    }
                };
                i(60) * poly(&[1, -1, 1]) * r - e8
            }
            ExpressionId::LelievreGeneral { modulus, k, l } => match &self.lelievre {
                Some(s) => s.coeff(idx).to_integer(),
                None => lelievre_coeff(modulus, k, l, n)?,
            },
        })
    }

    pub fn evaluate(&self, n: u64) -> Result<Evaluation, DetectorError> {
        let value = self.value(n)?;
        Ok(Evaluation {
            n,
            outcome: outcome(self.id, Sign::of(&value)),
            expected: self.id.expected(n),
            value,
        })
    }
}

/// Single evaluation without a shared table.
pub fn evaluate_expression(id: ExpressionId, n: u64, backend: Backend) -> Result<Evaluation, DetectorError> {
    Evaluator::new(id, backend, n.max(2)).evaluate(n)
}

/// Rows for `lo..=hi` in order and the `n` whose sign disagrees with the prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionReport {
    pub id: ExpressionId,
    pub backend: Backend,
    pub rows: Vec<Evaluation>,
    pub violations: Vec<u64>,
}

pub fn detect_range(id: ExpressionId, lo: u64, hi: u64, backend: Backend) -> Result<DetectionReport, DetectorError> {
    if lo < 2 || hi < lo {
        return Err(DetectorError::BadRange { lo, hi });
    }
    let ev = Evaluator::new(id, backend, hi);
    let rows: Vec<Evaluation> = (lo..=hi)
        .into_par_iter()
        .map(|n| ev.evaluate(n))
        .collect::<Result<_, _>>()?;
    let violations = rows.iter().filter(|r| !r.consistent()).map(|r| r.n).collect();
    Ok(DetectionReport {
        id,
        backend,
        rows,
        violations,
    })
}
