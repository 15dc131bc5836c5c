//! Eisenstein-type series, eta products and basis decomposition.
//!
//! `G_{S,N,ε,k}(q) = Σ_n σ_{S,N,ε,k-1}(n) q^n` is built with a sieve over
//! multiples; the normalized `E_k`, `E_{2,N}` and the coprime series
//! `G_k^{(N)}` are specializations. [`decompose_in_basis`] solves for rational
//! coordinates of a target series in a list of series by exact elimination on
//! the first few coefficients and then checks every remaining coefficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::numtheory::{bernoulli, divisors, moebius, sigma_level2, ResidueClassSet, SignEps};
use crate::qseries::{refinement_lhs, QSeries, SeriesCheck};
use crate::Rational;

/// `G_{S,N,ε,k}(q)`; coefficient `n` is `Σ_{d | n, n/d ∈ S} ε^d d^{k-1}`.
pub fn eisenstein_g(classes: &ResidueClassSet, eps: SignEps, k: u32, order: usize) -> QSeries {
    assert!(k >= 1, "weight must be positive");
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for d in 1..=order {
        let term = BigInt::from(d).pow(k - 1);
        let term = if eps.pow(d as u64) < 0 { -term } else { term };
        for e in 1..=order / d {
            if classes.contains(e as u64) {
                coeffs[d * e] += &term;
            }
        }
    }
    QSeries::from_integers(coeffs)
}

/// `G_k(q) = Σ σ_{k-1}(n) q^n`.
pub fn eisenstein_g_full(k: u32, order: usize) -> QSeries {
    eisenstein_g(&ResidueClassSet::all(), SignEps::Plus, k, order)
}

/// `G_k^{(N)}(q)`: divisors `d` with `gcd(n/d, N) = 1`.
pub fn coprime_g(modulus: u64, k: u32, order: usize) -> QSeries {
    let units = ResidueClassSet::units(modulus).expect("modulus must be positive");
    eisenstein_g(&units, SignEps::Plus, k, order)
}

/// `E_k = 1 - (2k/B_k) G_k` for even `k ≥ 2`.
pub fn eisenstein_e(k: u32, order: usize) -> QSeries {
    assert!(k >= 2 && k % 2 == 0, "E_k needs even k ≥ 2");
    let b = bernoulli(k).expect("even index");
    let factor = -Rational::from_integer(BigInt::from(2 * k)) / b;
    &QSeries::one(order) + &eisenstein_g_full(k, order).scale(&factor)
}

/// `E_{2,N}(q) = E_2(q) - N·E_2(q^N)`.
pub fn e2n(modulus: u64, order: usize) -> QSeries {
    assert!(modulus >= 1, "modulus must be positive");
    let e2 = eisenstein_e(2, order);
    let dilated = e2.dilate(modulus as usize);
    &e2 - &dilated.scale_int(modulus as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("multipliers must be positive")]
    ZeroMultiplier,
    #[error("multiplier {0} appears twice")]
    DuplicateMultiplier(u64),
}

/// `q^{leading_power} Π_m Π_{j ≥ 1} (1 - q^{mj})^{e_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaProductSpec {
    factors: Vec<(u64, i64)>,
    leading_power: usize,
}

impl EtaProductSpec {
    pub fn new(factors: Vec<(u64, i64)>, leading_power: usize) -> Result<Self, EtaError> {
        let mut seen = Vec::new();
        for &(m, _) in &factors {
            if m == 0 {
                return Err(EtaError::ZeroMultiplier);
            }
            if seen.contains(&m) {
                return Err(EtaError::DuplicateMultiplier(m));
            }
            seen.push(m);
        }
        Ok(Self {
            factors,
            leading_power,
        })
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn leading_power(&self) -> usize {
        self.leading_power
    }
}

/// Exact expansion; negative exponents divide by `(1 - q^s)` in place.
pub fn eta_product(spec: &EtaProductSpec, order: usize) -> QSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    if spec.leading_power > order {
        return QSeries::from_integers(coeffs);
    }
    let span = order - spec.leading_power;
    let mut body = vec![BigInt::zero(); span + 1];
    body[0] = BigInt::one();
    for &(m, e) in &spec.factors {
        let mut s = m as usize;
        while s <= span {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    for n in (s..=span).rev() {
                        let t = body[n - s].clone();
                        body[n] -= t;
                    }
                } else {
                    for n in s..=span {
                        let t = body[n - s].clone();
                        body[n] += t;
                    }
                }
            }
            s += m as usize;
        }
    }
    for (n, c) in body.into_iter().enumerate() {
        coeffs[n + spec.leading_power] = c;
    }
    QSeries::from_integers(coeffs)
}

/// `Δ₂ = q Π (1 - q^j)^8 (1 - q^{2j})^8`.
pub fn delta2(order: usize) -> QSeries {
    eta_product(&EtaProductSpec::new(vec![(1, 8), (2, 8)], 1).expect("valid"), order)
}

/// `Δ₃ = q Π (1 - q^j)^6 (1 - q^{3j})^6`.
pub fn delta3(order: usize) -> QSeries {
    eta_product(&EtaProductSpec::new(vec![(1, 6), (3, 6)], 1).expect("valid"), order)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("basis is empty")]
    EmptyBasis,
    #[error("probe length {probe} is shorter than the basis size {basis}")]
    ProbeTooShort { probe: usize, basis: usize },
    #[error("probe length {probe} exceeds the shared series length {available}")]
    ProbeTooLong { probe: usize, available: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionStatus {
    ExactMatch,
    /// First power at which no combination of the basis reproduces the target.
    Mismatch(usize),
    Underdetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    /// One coordinate per basis element; empty unless the probe system has full rank.
    pub coefficients: Vec<Rational>,
    pub verified_order: usize,
    pub status: DecompositionStatus,
}

/// Default probe length: four coefficients past the basis size.
pub fn default_probe(basis_len: usize) -> usize {
    basis_len + 4
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Coordinates of `target` in `basis`.
///
/// Rows `q^0 … q^{probe-1}` are reduced one at a time by fraction-free integer
/// elimination; the first row that reduces to `0 = c ≠ 0` is reported as a
/// mismatch at that power. With full rank the solution is checked against all
/// remaining coefficients up to the shared order.
pub fn decompose_in_basis(
    target: &QSeries,
    basis: &[QSeries],
    probe: usize,
) -> Result<DecompositionResult, DecompositionError> {
    let b = basis.len();
    if b == 0 {
        return Err(DecompositionError::EmptyBasis);
    }
    if probe < b {
        return Err(DecompositionError::ProbeTooShort { probe, basis: b });
    }
    let order = basis
        .iter()
        .map(QSeries::order)
        .fold(target.order(), usize::min);
    if probe > order + 1 {
        return Err(DecompositionError::ProbeTooLong {
            probe,
            available: order + 1,
        });
    }

    // pivots[i] = (column, row) with row[column] ≠ 0 and zeros in earlier pivot columns
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for n in 0..probe {
        let entries: Vec<&Rational> = basis
            .iter()
            .map(|s| s.coeff(n))
            .chain(std::iter::once(target.coeff(n)))
            .collect();
        let scale = Rational::from_integer(lcm_of_denominators(entries.iter().copied()));
        let mut row: Vec<BigInt> = entries.iter().map(|x| (*x * &scale).to_integer()).collect();
        for (col, prow) in &pivots {
            if row[*col].is_zero() {
                continue;
            }
            let a = prow[*col].clone();
            let c = row[*col].clone();
            for (x, p) in row.iter_mut().zip(prow) {
                *x = &a * &*x - &c * p;
            }
            remove_content(&mut row);
        }
        match row[..b].iter().position(|x| !x.is_zero()) {
            Some(col) => pivots.push((col, row)),
            None if !row[b].is_zero() => {
                return Ok(DecompositionResult {
                    coefficients: Vec::new(),
                    verified_order: n,
                    status: DecompositionStatus::Mismatch(n),
                })
            }
            None => {}
        }
    }
    if pivots.len() < b {
        return Ok(DecompositionResult {
            coefficients: Vec::new(),
            verified_order: probe - 1,
            status: DecompositionStatus::Underdetermined,
        });
    }

    // Later pivot rows vanish on earlier pivot columns, so solve newest first.
    let mut coefficients = vec![Rational::zero(); b];
    for (col, row) in pivots.iter().rev() {
        let mut rhs = Rational::from_integer(row[b].clone());
        for (j, x) in row[..b].iter().enumerate() {
            if j != *col && !x.is_zero() {
                rhs -= Rational::from_integer(x.clone()) * &coefficients[j];
            }
        }
        coefficients[*col] = rhs / Rational::from_integer(row[*col].clone());
    }

    let mut combination = QSeries::zero(order);
    for (c, s) in coefficients.iter().zip(basis) {
        combination = &combination + &s.truncate(order).scale(c);
    }
    let status = match combination.first_mismatch(&target.truncate(order)) {
        None => DecompositionStatus::ExactMatch,
        Some(p) => DecompositionStatus::Mismatch(p),
    };
    Ok(DecompositionResult {
        coefficients,
        verified_order: order,
        status,
    })
}

/// A named basis series.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub name: String,
    pub series: QSeries,
}

/// Generators of the level-2 modular form spaces of weights 2, 4, 6, 8.
fn level2_modular(weight: u32, order: usize) -> Vec<BasisElement> {
    let el = |name: String, series: QSeries| BasisElement { name, series };
    match weight {
        2 => vec![el("E2,2".into(), e2n(2, order))],
        4 | 6 | 8 => {
            let mut v = vec![
                el(format!("E{weight}"), eisenstein_e(weight, order)),
                el(format!("G{weight}(2)"), coprime_g(2, weight, order)),
            ];
            if weight == 8 {
                v.push(el("Delta2".into(), delta2(order)));
            }
            v
        }
        _ => panic!("no level-2 catalog for weight {weight}"),
    }
}

fn d_name(j: u32, name: &str) -> String {
    match j {
        0 => name.to_string(),
        1 => format!("D {name}"),
        _ => format!("D^{j} {name}"),
    }
}

/// Quasi-modular basis of mixed weight `≤ max_weight` at level 2: for each even
/// weight `w`, from the top down, `D^j M_{w-2j}` for `j = 0, 1, …` followed by
/// `D^{w/2-1} G₂^{(2)}`.
pub fn level2_quasimodular_basis(max_weight: u32, order: usize) -> Vec<BasisElement> {
    assert!(
        (2..=8).contains(&max_weight) && max_weight % 2 == 0,
        "level-2 catalogs cover weights 2, 4, 6, 8"
    );
    let g2 = coprime_g(2, 2, order);
    let mut out = Vec::new();
    for w in (2..=max_weight).rev().step_by(2) {
        for j in 0..w / 2 {
            for e in level2_modular(w - 2 * j, order) {
                let mut s = e.series;
                for _ in 0..j {
                    s = s.d_operator();
                }
                out.push(BasisElement {
                    name: d_name(j, &e.name),
                    series: s,
                });
            }
        }
        let mut s = g2.clone();
        for _ in 0..w / 2 - 1 {
            s = s.d_operator();
        }
        out.push(BasisElement {
            name: d_name(w / 2 - 1, "G2(2)"),
            series: s,
        });
    }
    out
}

/// `M_k^{(2)}(n)` for `k ≤ 4` from the closed σ^{(2)} formulas; `k = 4` also
/// needs the cusp-form coefficient `a(n)` of `Δ₂`.
pub fn level2_macmahon_formula(k: usize, n: u64) -> BigInt {
    assert!(n >= 1, "n must be positive");
    let s = |j: u32| sigma_level2(j, n).expect("n ≥ 1");
    let m = BigInt::from(n);
    let i = |x: i64| BigInt::from(x);
    let (num, den): (BigInt, i64) = match k {
        1 => (s(1), 1),
        2 => (s(3) - (i(3) * &m - 2) * s(1), 24),
        3 => (
            s(5) - i(5) * (i(3) * &m - 8) * s(3) + i(2) * (i(15) * &m * &m - i(60) * &m + 32) * s(1),
            5760,
        ),
        4 => {
            let a = delta2(n as usize).coeff(n as usize).to_integer();
            (
                i(3) * s(7) - i(119) * (&m - 6) * s(5)
                    + i(357) * (i(3) * &m * &m - i(30) * &m + 56) * s(3)
                    - i(51) * (i(35) * &m * &m * &m - i(420) * &m * &m + i(1176) * &m - 576) * s(1)
                    + i(14) * a,
                16450560,
            )
        }
        _ => panic!("closed formulas exist for k ≤ 4 only"),
    };
    let (q, r) = num.div_rem(&BigInt::from(den));
    assert!(r.is_zero(), "formula for M_{k}^(2)({n}) is not integral");
    q
}

/// `DE₂ = (E₂² - E₄)/12`, `DE₄ = (E₂E₄ - E₆)/3`, `DE₆ = (E₂E₆ - E₄²)/2`.
pub fn ramanujan_checks(order: usize) -> Vec<SeriesCheck> {
    let e2 = eisenstein_e(2, order);
    let e4 = eisenstein_e(4, order);
    let e6 = eisenstein_e(6, order);
    let r = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
    vec![
        SeriesCheck::compare("D E2 = (E2^2 - E4)/12", &e2.d_operator(), &(&(&e2 * &e2) - &e4).scale(&r(1, 12))),
        SeriesCheck::compare("D E4 = (E2 E4 - E6)/3", &e4.d_operator(), &(&(&e2 * &e4) - &e6).scale(&r(1, 3))),
        SeriesCheck::compare("D E6 = (E2 E6 - E4^2)/2", &e6.d_operator(), &(&(&e2 * &e6) - &(&e4 * &e4)).scale(&r(1, 2))),
    ]
}

/// `G_k^{(N)} = -(B_k/2k) Σ_{l | N} μ(l) E_k(q^l)`.
pub fn moebius_check(modulus: u64, k: u32, order: usize) -> SeriesCheck {
    let ek = eisenstein_e(k, order);
    let mut sum = QSeries::zero(order);
    for l in divisors(modulus) {
        let mu = moebius(l).expect("l ≥ 1");
        if mu != 0 {
            sum = &sum + &ek.dilate(l as usize).scale_int(mu as i64);
        }
    }
    let factor = -bernoulli(k).expect("even") / Rational::from_integer(BigInt::from(2 * k));
    SeriesCheck::compare(
        format!("G{k}({modulus}) = -(B{k}/{}) sum mu(l) E{k}(q^l)", 2 * k),
        &coprime_g(modulus, k, order),
        &sum.scale(&factor),
    )
}

/// `G_{S,N,-1,k}(q) = 2^k G_{S,N,1,k}(q²) - G_{S,N,1,k}(q)`.
pub fn eps_minus_check(classes: &ResidueClassSet, k: u32, order: usize) -> SeriesCheck {
    let plus = eisenstein_g(classes, SignEps::Plus, k, order);
    let rhs = &plus.dilate(2).scale_int(1i64 << k) - &plus;
    SeriesCheck::compare(
        format!("G[{classes},-1,{k}] = 2^{k} G[+1](q^2) - G[+1](q)"),
        &eisenstein_g(classes, SignEps::Minus, k, order),
        &rhs,
    )
}

/// `E₂(q^N) = (E₂ - E_{2,N})/N`.
pub fn e2_dilation_check(modulus: u64, order: usize) -> SeriesCheck {
    let e2 = eisenstein_e(2, order);
    let rhs = (&e2 - &e2n(modulus, order)).scale(&Rational::new(BigInt::one(), BigInt::from(modulus)));
    SeriesCheck::compare(format!("E2(q^{modulus}) = (E2 - E2,{modulus})/{modulus}"), &e2.dilate(modulus as usize), &rhs)
}

/// `G_k = -(B_k/2k)(E_k - 1)`.
pub fn g_from_e_check(k: u32, order: usize) -> SeriesCheck {
    let factor = -bernoulli(k).expect("even") / Rational::from_integer(BigInt::from(2 * k));
    let rhs = (&eisenstein_e(k, order) - &QSeries::one(order)).scale(&factor);
    SeriesCheck::compare(format!("G{k} = -(B{k}/{})(E{k} - 1)", 2 * k), &eisenstein_g_full(k, order), &rhs)
}

/// Every fixed identity above together with the refinement identity, all at
/// one truncation order.
pub fn identity_suite(order: usize) -> Vec<SeriesCheck> {
    let mut checks = ramanujan_checks(order);
    for k in 1..=8usize.min(order) {
        let rhs = QSeries::monomial(Rational::new(BigInt::one(), BigInt::from(k)), k, order);
        checks.push(SeriesCheck::compare(format!("refinement k={k}"), &refinement_lhs(k, order), &rhs));
    }
    for modulus in [2, 3, 6] {
        for k in [4, 6] {
            checks.push(moebius_check(modulus, k, order));
        }
    }
    for modulus in 1..=6 {
        checks.push(eps_minus_check(&ResidueClassSet::units(modulus).expect("modulus ≥ 1"), 2, order));
        checks.push(e2_dilation_check(modulus, order));
    }
    for k in [2, 4, 6, 8] {
        checks.push(g_from_e_check(k, order));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::sigma;

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn g2_and_level2() {
        let g2 = eisenstein_g_full(2, 10);
        assert_eq!(&g2.coeffs()[..5], &[int(0), int(1), int(3), int(4), int(7)]);
        assert_eq!(coprime_g(2, 2, 10).coeff(4), &int(4));
        assert_eq!(coprime_g(1, 4, 20), eisenstein_g_full(4, 20));
        for n in 1..=10u64 {
            assert_eq!(g2.coeff(n as usize), &Rational::from_integer(sigma(1, n).unwrap()));
        }
    }

    #[test]
    fn normalized_series() {
        let e2 = eisenstein_e(2, 5);
        assert_eq!(&e2.coeffs()[..3], &[int(1), int(-24), int(-72)]);
        assert_eq!(eisenstein_e(4, 3).coeff(1), &int(240));
        assert_eq!(eisenstein_e(6, 3).coeff(1), &int(-504));
        for k in [2, 4, 6, 8] {
            assert!(g_from_e_check(k, 30).passed());
        }
    }

    #[test]
    fn eta_products() {
        let d2 = delta2(10);
        assert!(d2.coeff(0).is_zero());
        assert_eq!(d2.coeff(1), &int(1));
        assert_eq!(d2.coeff(2), &int(-8));
        assert_eq!(delta3(5).coeff(1), &int(1));
        // Π(1 - q^j)^{-1} is the partition generating function.
        let p = eta_product(&EtaProductSpec::new(vec![(1, -1)], 0).unwrap(), 10);
        let parts = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        assert_eq!(p, QSeries::from_integers(parts));
        assert!(EtaProductSpec::new(vec![(2, 1), (2, 3)], 0).is_err());
        assert!(EtaProductSpec::new(vec![(0, 1)], 0).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let order = 20;
        let basis: Vec<QSeries> = level2_quasimodular_basis(4, order).into_iter().map(|e| e.series).collect();
        let r = decompose_in_basis(&basis[3], &basis, default_probe(basis.len())).unwrap();
        assert_eq!(r.status, DecompositionStatus::ExactMatch);
        let unit: Vec<Rational> = (0..basis.len()).map(|i| int((i == 3) as i64)).collect();
        assert_eq!(r.coefficients, unit);

        let off = &basis[0] + &QSeries::monomial(int(1), 15, order);
        let r = decompose_in_basis(&off, &basis, 10).unwrap();
        assert_eq!(r.status, DecompositionStatus::Mismatch(15));

        let dup = vec![basis[0].clone(), basis[0].clone()];
        let r = decompose_in_basis(&basis[0], &dup, 4).unwrap();
        assert_eq!(r.status, DecompositionStatus::Underdetermined);

        assert!(matches!(
            decompose_in_basis(&basis[0], &basis, 3),
            Err(DecompositionError::ProbeTooShort { .. })
        ));
        assert!(decompose_in_basis(&basis[0], &[], 3).is_err());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(level2_quasimodular_basis(4, 10).len(), 6);
        assert_eq!(level2_quasimodular_basis(6, 10).len(), 12);
        assert_eq!(level2_quasimodular_basis(8, 10).len(), 21);
        let names: Vec<String> = level2_quasimodular_basis(4, 5).into_iter().map(|e| e.name).collect();
        assert_eq!(names, ["E4", "G4(2)", "D E2,2", "D G2(2)", "E2,2", "G2(2)"]);
    }

    #[test]
    fn identities_small_order() {
        assert!(ramanujan_checks(30).iter().all(SeriesCheck::passed));
        assert!(moebius_check(6, 4, 30).passed());
        assert!(eps_minus_check(&ResidueClassSet::new(5, [1, 4]).unwrap(), 4, 30).passed());
        assert!(e2_dilation_check(3, 30).passed());
    }

    #[test]
    fn level2_formulas_small() {
        assert_eq!(level2_macmahon_formula(1, 6), BigInt::from(8));
        assert_eq!(level2_macmahon_formula(2, 9), BigInt::from(18));
        assert_eq!(level2_macmahon_formula(2, 3), BigInt::zero());
    }
}
