//! Exact point counting on shifted lattices.
//!
//! A [`ShiftedLattice`] is `{v + s : v ∈ ℤ^r}` with the norm
//! `(v+s)ᵀ G (v+s)` for a rational Gram matrix `G`. Counting uses a
//! Fincke–Pohst enumeration in which every quantity is an integer: after
//! clearing denominators the norm becomes `Σ_i W_i (L_i x_i + C_i)²`, so
//! coordinate ranges come from integer square roots and no boundary vector is
//! ever lost to rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::numtheory::{sigma, sigma_gated};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix must be square and match the shift length")]
    Shape,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("unknown lattice {0:?}; expected L1, L2 or E8")]
    UnknownName(String),
    #[error("enumeration bound {0} is too large for machine-word arithmetic")]
    BoundTooLarge(u64),
}

/// The three lattices of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeName {
    L1,
    L2,
    E8,
}

impl std::str::FromStr for LatticeName {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L1" => Ok(LatticeName::L1),
            "L2" => Ok(LatticeName::L2),
            "E8" => Ok(LatticeName::E8),
            _ => Err(LatticeError::UnknownName(s.to_string())),
        }
    }
}

impl std::fmt::Display for LatticeName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Gram matrix of the `E₈` basis `2e₁, e₂-e₁, …, e₇-e₆, ½·(1,…,1)`.
pub const E8_GRAM: [[i64; 8]; 8] = [
    [4, -2, 0, 0, 0, 0, 0, 1],
    [-2, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [1, 0, 0, 0, 0, 0, 0, 2],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedLattice {
    name: String,
    gram: Vec<Vec<Rational>>,
    shift: Vec<Rational>,
    half_norm_theta: bool,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// `D_i` and the unit upper-triangular `U` with `Q(y) = Σ D_i (y_i + Σ_{j>i} U_ij y_j)²`.
fn ldl(gram: &[Vec<Rational>]) -> Result<(Vec<Rational>, Vec<Vec<Rational>>), LatticeError> {
    let r = gram.len();
    let mut s = gram.to_vec();
    let mut d = Vec::with_capacity(r);
    let mut u = vec![vec![Rational::zero(); r]; r];
    for i in 0..r {
        let pivot = s[i][i].clone();
        if !pivot.is_positive() {
            return Err(LatticeError::NotPositiveDefinite(i + 1));
        }
        for j in i + 1..r {
            u[i][j] = &s[i][j] / &pivot;
        }
        for j in i + 1..r {
            for k in i + 1..r {
                let t = &s[j][i] * &s[i][k] / &pivot;
                s[j][k] -= t;
            }
        }
        u[i][i] = Rational::one();
        d.push(pivot);
    }
    Ok((d, u))
}

impl ShiftedLattice {
    pub fn new(
        name: impl Into<String>,
        gram: Vec<Vec<Rational>>,
        shift: Vec<Rational>,
    ) -> Result<Self, LatticeError> {
        let r = shift.len();
        if r == 0 || gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(LatticeError::Shape);
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        // pivots of the elimination are the ratios of consecutive leading minors
        ldl(&gram)?;
        Ok(Self {
            name: name.into(),
            gram,
            shift,
            half_norm_theta: false,
        })
    }

    pub fn catalog(name: LatticeName) -> Self {
        match name {
            LatticeName::L1 | LatticeName::L2 => {
                let gram = [4, 4, 2, 2]
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| (0..4).map(|j| rat(if i == j { g } else { 0 })).collect())
                    .collect();
                let first = if name == LatticeName::L1 { Rational::zero() } else { half() };
                let shift = vec![first.clone(), first, half(), half()];
                Self::new(name.to_string(), gram, shift).expect("catalog lattice is valid")
            }
            LatticeName::E8 => {
                let gram = E8_GRAM.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
                let mut l = Self::new("E8", gram, vec![Rational::zero(); 8]).expect("catalog lattice is valid");
                l.half_norm_theta = true;
                l
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.shift.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    /// Whether the theta series is indexed by half the norm.
    pub fn half_norm_theta(&self) -> bool {
        self.half_norm_theta
    }

    /// Exact determinant of the Gram matrix.
    pub fn determinant(&self) -> Rational {
        let (d, _) = ldl(&self.gram).expect("validated at construction");
        d.iter().fold(Rational::one(), |acc, x| acc * x)
    }

    /// `(v+s)ᵀ G (v+s)`.
    pub fn norm(&self, v: &[i64]) -> Rational {
        let y: Vec<Rational> = v.iter().zip(&self.shift).map(|(&a, s)| rat(a) + s).collect();
        let mut total = Rational::zero();
        for (i, yi) in y.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                total += &self.gram[i][j] * yi * yj;
            }
        }
        total
    }

    /// Whether every `v ∈ [-radius, radius]^r` has an integral norm.
    pub fn integral_norms_on_box(&self, radius: i64) -> bool {
        let r = self.rank();
        let side = (2 * radius + 1) as usize;
        let total = side.pow(r as u32);
        (0..total).all(|mut idx| {
            let v: Vec<i64> = (0..r)
                .map(|_| {
                    let c = (idx % side) as i64 - radius;
                    idx /= side;
                    c
                })
                .collect();
            self.norm(&v).is_integer()
        })
    }
}

/// Integer data for enumerating `x = σ(v + s)`, `x ≡ t (mod σ)`, in a
/// permuted coordinate order with the smallest diagonal innermost.
struct Enumerator {
    r: usize,
    /// `x` values are congruent to `t_i` modulo `sigma`.
    sigma: i64,
    t: Vec<i64>,
    /// `z_i = l[i]·x_i + Σ_{j>i} u[i][j]·x_j`.
    l: Vec<i64>,
    u: Vec<Vec<i64>>,
    w: Vec<i64>,
    /// `Σ W_i z_i² = m · xᵀAx`.
    m: i64,
    /// True norm is `xᵀAx / k_norm`.
    k_norm: i64,
    /// `A_00` in the permuted order, for the innermost second difference.
    a00: i64,
}

/// `⌊√x⌋` for `0 ≤ x < 2⁶²`.
fn isqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn lcm_denoms<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("lattice data fits in i64")
}

impl Enumerator {
    fn new(lat: &ShiftedLattice) -> Self {
        let r = lat.rank();
        let mut perm: Vec<usize> = (0..r).collect();
        let inner = (0..r)
            .min_by(|&a, &b| lat.gram[a][a].cmp(&lat.gram[b][b]))
            .expect("rank ≥ 1");
        perm.swap(0, inner);

        let g = lcm_denoms(lat.gram.iter().flatten());
        let sigma = lcm_denoms(lat.shift.iter());
        let gq = Rational::from_integer(g.clone());
        let a: Vec<Vec<Rational>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| &lat.gram[i][j] * &gq).collect())
            .collect();
        let t: Vec<i64> = perm
            .iter()
            .map(|&i| {
                let x = (&lat.shift[i] * Rational::from_integer(sigma.clone())).to_integer();
                small(&x.mod_floor(&sigma))
            })
            .collect();

        let (d, u) = ldl(&a).expect("validated at construction");
        let mut l = Vec::with_capacity(r);
        let mut ui = Vec::with_capacity(r);
        for i in 0..r {
            let li = lcm_denoms(u[i][i + 1..].iter());
            let liq = Rational::from_integer(li.clone());
            ui.push(
                (0..r)
                    .map(|j| if j > i { small(&(&u[i][j] * &liq).to_integer()) } else { 0 })
                    .collect(),
            );
            l.push(li);
        }
        // W_i = M · D_i / L_i²
        let wr: Vec<Rational> = (0..r)
            .map(|i| &d[i] / Rational::from_integer(&l[i] * &l[i]))
            .collect();
        let m = lcm_denoms(wr.iter());
        let mq = Rational::from_integer(m.clone());
        let w = wr
            .iter()
            .map(|x| (x * &mq).to_integer().to_i64().expect("weights fit in i64"))
            .collect();
        Self {
            r,
            sigma: small(&sigma),
            t,
            l: l.iter().map(small).collect(),
            u: ui,
            w,
            m: m.to_i64().expect("scale fits in i64"),
            k_norm: small(&(&g * &sigma * &sigma)),
            a00: small(&a[0][0].to_integer()),
        }
    }

    /// Smallest `x ≥ lo` with `x ≡ t (mod σ)`.
    fn first_in_class(&self, lo: i64, t: i64) -> i64 {
        lo + (t - lo).rem_euclid(self.sigma)
    }

    /// `x`-range with `|l·x + c| ≤ zmax` in the residue class of `t`.
    fn range(&self, i: usize, c: i64, zmax: i64) -> (i64, i64) {
        let l = self.l[i];
        let lo = Integer::div_ceil(&(-zmax - c), &l);
        let hi = Integer::div_floor(&(zmax - c), &l);
        (self.first_in_class(lo, self.t[i]), hi)
    }

    fn center(&self, i: usize, x: &[i64]) -> i64 {
        (i + 1..self.r).map(|j| self.u[i][j] * x[j]).sum()
    }

    /// Visits every coset vector with `Σ W z² ≤ budget`; `leaf` receives the
    /// scaled partial sum above level 0, the centre `C_0` and the level-0 range.
    fn walk(&self, level: usize, x: &mut [i64], used: i64, budget: i64, leaf: &mut impl FnMut(i64, i64, i64, i64)) {
        let c = self.center(level, x);
        let zmax = isqrt((budget - used) / self.w[level]);
        let (lo, hi) = self.range(level, c, zmax);
        if level == 0 {
            if lo <= hi {
                leaf(used, c, lo, hi);
            }
            return;
        }
        let mut xi = lo;
        while xi <= hi {
            x[level] = xi;
            let z = self.l[level] * xi + c;
            self.walk(level - 1, x, used + self.w[level] * z * z, budget, leaf);
            xi += self.sigma;
        }
    }

    /// Outermost coordinate values, each an independent subtree.
    fn top_values(&self, budget: i64) -> Vec<i64> {
        let top = self.r - 1;
        let zmax = isqrt(budget / self.w[top]);
        let (lo, hi) = self.range(top, 0, zmax);
        (lo..=hi).step_by(self.sigma as usize).collect()
    }

    fn for_each_top<T: Send>(&self, budget: i64, init: impl Fn() -> T + Sync, body: impl Fn(&mut T, i64, i64, i64, i64) + Sync, merge: impl Fn(T, T) -> T + Sync + Send) -> T {
        let top = self.r - 1;
        if self.r == 1 {
            let mut acc = init();
            let x = vec![0i64; 1];
            let c = self.center(0, &x);
            let zmax = isqrt(budget / self.w[0]);
            let (lo, hi) = self.range(0, c, zmax);
            if lo <= hi {
                body(&mut acc, 0, c, lo, hi);
            }
            return acc;
        }
        self.top_values(budget)
            .into_par_iter()
            .map(|xt| {
                let mut acc = init();
                let mut x = vec![0i64; self.r];
                x[top] = xt;
                let z = self.l[top] * xt;
                let used = self.w[top] * z * z;
                self.walk(top - 1, &mut x, used, budget, &mut |u, c, lo, hi| body(&mut acc, u, c, lo, hi));
                acc
            })
            .reduce(&init, &merge)
    }

    fn scaled_norm(&self, used: i64, c: i64, x0: i64) -> i64 {
        let z = self.l[0] * x0 + c;
        let total = used + self.w[0] * z * z;
        debug_assert_eq!(total % self.m, 0);
        total / self.m
    }

    /// `hist[N]` counts vectors with `xᵀAx = N` for `N ≤ nmax`.
    fn histogram(&self, nmax: i64) -> Vec<u64> {
        let budget = self.m * nmax;
        let step2 = 2 * self.sigma.pow(2) * self.a00;
        self.for_each_top(
            budget,
            || vec![0u64; nmax as usize + 1],
            |hist, used, c, lo, hi| {
                let mut n = self.scaled_norm(used, c, lo);
                if lo + self.sigma > hi {
                    hist[n as usize] += 1;
                    return;
                }
                let mut delta = self.scaled_norm(used, c, lo + self.sigma) - n;
                let mut x = lo;
                while x <= hi {
                    hist[n as usize] += 1;
                    n += delta;
                    delta += step2;
                    x += self.sigma;
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
    }

    /// Number of vectors with `xᵀAx = target`, solving the innermost quadratic.
    fn count_exact(&self, target: i64) -> u64 {
        let goal = self.m * target;
        let (l0, sigma, t0) = (self.l[0], self.sigma, self.t[0]);
        self.for_each_top(
            goal,
            || 0u64,
            |count, used, c, _, _| {
                let rest = goal - used;
                if rest % self.w[0] != 0 {
                    return;
                }
                let sq = rest / self.w[0];
                let z = isqrt(sq);
                if z * z != sq {
                    return;
                }
                let zs: &[i64] = if z == 0 { &[0] } else { &[z, -z] };
                for &zz in zs {
                    let num = zz - c;
                    if num % l0 == 0 && (num / l0 - t0).rem_euclid(sigma) == 0 {
                        *count += 1;
                    }
                }
            },
            |a, b| a + b,
        )
    }
}

/// `n` in units of `xᵀAx`, provided the scaled budget `m·n·k_norm` stays below 2⁶⁰.
fn norm_bound(n: u64, e: &Enumerator) -> Result<i64, LatticeError> {
    i64::try_from(n)
        .ok()
        .and_then(|n| n.checked_mul(e.k_norm))
        .filter(|b| b.checked_mul(e.m).is_some_and(|s| s < (1 << 60)))
        .ok_or(LatticeError::BoundTooLarge(n))
}

/// `r_L(n) = #{x ∈ L : ‖x‖² = n}` by exact enumeration.
pub fn lattice_count(lat: &ShiftedLattice, n: u64) -> Result<u64, LatticeError> {
    let e = Enumerator::new(lat);
    let target = norm_bound(n, &e)?;
    Ok(e.count_exact(target))
}

/// `[r_L(0), …, r_L(max_norm)]` from one enumeration of the ball.
pub fn norm_counts(lat: &ShiftedLattice, max_norm: u64) -> Result<Vec<u64>, LatticeError> {
    let e = Enumerator::new(lat);
    let nmax = norm_bound(max_norm, &e)?;
    let hist = e.histogram(nmax);
    Ok((0..=max_norm as usize).map(|n| hist[n * e.k_norm as usize]).collect())
}

/// Coefficients of the theta series through `q^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSeries {
    pub counts: Vec<u64>,
}

/// `counts[n] = r_L(n)`, or `r_L(2n)` for a lattice with the half-norm convention.
pub fn theta_series(lat: &ShiftedLattice, order: usize) -> Result<ThetaSeries, LatticeError> {
    if lat.half_norm_theta {
        let all = norm_counts(lat, 2 * order as u64)?;
        Ok(ThetaSeries {
            counts: all.into_iter().step_by(2).collect(),
        })
    } else {
        Ok(ThetaSeries {
            counts: norm_counts(lat, order as u64)?,
        })
    }
}

/// Closed divisor-sum formulas for the catalog lattices: `4σ₁^{(1,4)}(n)` on
/// `L₁`, `4σ₁^{(3,4)}(n)` on `L₂`, and `r_{E₈}(2n) = 240σ₃(n)` for `E₈`.
pub fn lattice_count_formula(name: LatticeName, n: u64) -> BigInt {
    assert!(n >= 1, "n must be positive");
    match name {
        LatticeName::L1 => 4 * sigma_gated(1, 1, 4, n).expect("n ≥ 1"),
        LatticeName::L2 => 4 * sigma_gated(1, 3, 4, n).expect("n ≥ 1"),
        LatticeName::E8 => 240 * sigma(3, n).expect("n ≥ 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(lat: &ShiftedLattice, radius: i64, max_norm: u64) -> Vec<u64> {
        let r = lat.rank();
        let side = (2 * radius + 1) as usize;
        let mut counts = vec![0u64; max_norm as usize + 1];
        for mut idx in 0..side.pow(r as u32) {
            let v: Vec<i64> = (0..r)
                .map(|_| {
                    let c = (idx % side) as i64 - radius;
                    idx /= side;
                    c
                })
                .collect();
            let nm = lat.norm(&v);
            if nm.is_integer() {
                if let Some(n) = nm.to_integer().to_u64() {
                    if n <= max_norm {
                        counts[n as usize] += 1;
                    }
                }
            }
        }
        counts
    }

    #[test]
    fn catalog_self_checks() {
        let e8 = ShiftedLattice::catalog(LatticeName::E8);
        assert_eq!(e8.determinant(), Rational::one());
        assert!((0..8).all(|i| e8.gram()[i][i].to_integer().is_even()));
        for name in [LatticeName::L1, LatticeName::L2, LatticeName::E8] {
            let radius = if name == LatticeName::E8 { 1 } else { 2 };
            assert!(ShiftedLattice::catalog(name).integral_norms_on_box(radius));
        }
    }

    #[test]
    fn rejects_bad_gram() {
        let g = vec![vec![rat(1), rat(2)], vec![rat(2), rat(1)]];
        assert_eq!(
            ShiftedLattice::new("x", g, vec![Rational::zero(); 2]),
            Err(LatticeError::NotPositiveDefinite(2))
        );
        let g = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        assert_eq!(ShiftedLattice::new("x", g, vec![Rational::zero(); 2]), Err(LatticeError::NotSymmetric));
    }

    #[test]
    fn small_counts() {
        let l1 = ShiftedLattice::catalog(LatticeName::L1);
        assert_eq!(lattice_count(&l1, 1).unwrap(), 4);
        assert_eq!(lattice_count(&l1, 3).unwrap(), 0);
        assert_eq!(lattice_count(&l1, 0).unwrap(), 0);
        let e8 = ShiftedLattice::catalog(LatticeName::E8);
        assert_eq!(lattice_count(&e8, 0).unwrap(), 1);
        assert_eq!(lattice_count(&e8, 2).unwrap(), 240);
        assert_eq!(lattice_count_formula(LatticeName::L1, 5), BigInt::from(24));
        assert_eq!(lattice_count_formula(LatticeName::L2, 5), BigInt::zero());
        assert_eq!(lattice_count_formula(LatticeName::E8, 5), BigInt::from(30240));
    }

    #[test]
    fn enumeration_matches_box_search() {
        // A ball of norm ≤ 12 fits in the radius-3 box for these Gram matrices.
        for name in [LatticeName::L1, LatticeName::L2] {
            let lat = ShiftedLattice::catalog(name);
            assert_eq!(norm_counts(&lat, 12).unwrap(), brute(&lat, 3, 12), "{name}");
        }
        let skew = ShiftedLattice::new(
            "skew",
            vec![vec![rat(2), half()], vec![half(), Rational::new(3.into(), 2.into())]],
            vec![Rational::new(1.into(), 3.into()), Rational::zero()],
        )
        .unwrap();
        let counts = brute(&skew, 6, 10);
        for n in 0..=10u64 {
            assert_eq!(lattice_count(&skew, n).unwrap(), counts[n as usize], "n = {n}");
        }
    }

    #[test]
    fn theta_conventions() {
        let e8 = theta_series(&ShiftedLattice::catalog(LatticeName::E8), 3).unwrap();
        assert_eq!(e8.counts, vec![1, 240, 2160, 6720]);
        let l1 = theta_series(&ShiftedLattice::catalog(LatticeName::L1), 9).unwrap();
        assert_eq!(l1.counts[0], 0);
        assert!(l1.counts.iter().enumerate().all(|(n, &c)| n % 4 == 1 || c == 0));
    }

    #[test]
    fn unknown_name() {
        assert!("L3".parse::<LatticeName>().is_err());
        assert_eq!("e8".parse::<LatticeName>().unwrap(), LatticeName::E8);
    }
}
