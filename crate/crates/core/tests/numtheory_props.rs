use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use macmahon_core::numtheory::{divisor_sum_general, is_power_of, is_prime, moebius, prime_factors, sigma};
use macmahon_core::{ResidueClassSet, SignEps};

fn eratosthenes(limit: usize) -> Vec<bool> {
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    if limit >= 1 {
        sieve[1] = false;
    }
    let mut p = 2;
    while p * p <= limit {
        if sieve[p] {
            for m in (p * p..=limit).step_by(p) {
                sieve[m] = false;
            }
        }
        p += 1;
    }
    sieve
}

/// `table[n] = Σ_{d | n, n/d ∈ S} ε^d d^k` by scattering each `d` over its multiples.
fn divisor_sum_sieve(classes: &ResidueClassSet, eps: SignEps, k: u32, limit: u64) -> Vec<i128> {
    let mut table = vec![0i128; limit as usize + 1];
    for d in 1..=limit {
        let term = (d as i128).pow(k) * eps.pow(d) as i128;
        for q in 1..=limit / d {
            if classes.contains(q) {
                table[(d * q) as usize] += term;
            }
        }
    }
    table
}

fn residue_sets() -> impl Strategy<Value = ResidueClassSet> {
    (1u64..=6).prop_flat_map(|modulus| {
        proptest::collection::btree_set(0..modulus, 1..=modulus as usize)
            .prop_map(move |rs| ResidueClassSet::new(modulus, rs).unwrap())
    })
}

fn eps() -> impl Strategy<Value = SignEps> {
    prop_oneof![Just(SignEps::Plus), Just(SignEps::Minus)]
}

#[test]
fn primality_matches_sieve_to_a_million() {
    let limit = 1_000_000;
    let sieve = eratosthenes(limit);
    for n in 0..=limit {
        assert_eq!(is_prime(n as u64), sieve[n], "n = {n}");
    }
}

#[test]
fn divisor_sums_match_sieve() {
    let limit = 3000;
    for modulus in 1..=6u64 {
        for classes in [ResidueClassSet::units(modulus).unwrap(), ResidueClassSet::new(modulus, [0]).unwrap()] {
            for e in [SignEps::Plus, SignEps::Minus] {
                for k in 0..=3 {
                    let table = divisor_sum_sieve(&classes, e, k, limit);
                    for n in 1..=limit {
                        assert_eq!(
                            divisor_sum_general(&classes, e, k, n).unwrap(),
                            BigInt::from(table[n as usize]),
                            "S = {classes}, ε = {e:?}, k = {k}, n = {n}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn sigma_is_multiplicative_on_coprime_arguments() {
    for k in 0..=3 {
        let table: Vec<BigInt> = (0..=200u64).map(|n| if n == 0 { BigInt::from(0) } else { sigma(k, n).unwrap() }).collect();
        for a in 1..=200u64 {
            for b in 1..=200u64 {
                if a.gcd(&b) == 1 {
                    assert_eq!(sigma(k, a * b).unwrap(), &table[a as usize] * &table[b as usize], "k={k}, a={a}, b={b}");
                }
            }
        }
    }
}

#[test]
fn unit_classes_at_primes() {
    for modulus in 1..=6u64 {
        let units = ResidueClassSet::units(modulus).unwrap();
        for p in (2..100u64).filter(|&p| is_prime(p) && modulus % p != 0) {
            for k in 0..=5 {
                assert_eq!(
                    divisor_sum_general(&units, SignEps::Plus, k, p).unwrap(),
                    BigInt::from(1) + BigInt::from(p).pow(k),
                    "N={modulus}, p={p}, k={k}"
                );
            }
        }
    }
}

#[test]
fn factorization_helpers_agree() {
    for n in 1..=2000u64 {
        let factors = prime_factors(n);
        assert!(factors.iter().all(|&p| is_prime(p) && n % p == 0));
        let squarefree = (2..=n).all(|d| n % (d * d) != 0);
        let mu = moebius(n).unwrap();
        if !squarefree {
            assert_eq!(mu, 0, "n = {n}");
        }
        for base in [2u64, 3] {
            let mut m = n;
            while m % base == 0 {
                m /= base;
            }
            assert_eq!(is_power_of(n, base), m == 1 && n > 1, "n = {n}, base = {base}");
        }
    }
}

proptest! {
    #[test]
    fn eps_minus_decomposition(classes in residue_sets(), k in 1u32..=6, n in 1u64..=500) {
        let plus = |m: u64| divisor_sum_general(&classes, SignEps::Plus, k - 1, m).unwrap();
        let half = if n % 2 == 0 { plus(n / 2) } else { BigInt::from(0) };
        let expected = (BigInt::from(1) << k) * half - plus(n);
        prop_assert_eq!(divisor_sum_general(&classes, SignEps::Minus, k - 1, n).unwrap(), expected);
    }

    #[test]
    fn sign_only_flips_odd_divisor_terms(classes in residue_sets(), e in eps(), k in 0u32..=4, n in 1u64..=400) {
        let value = divisor_sum_general(&classes, e, k, n).unwrap();
        let total = divisor_sum_general(&classes, SignEps::Plus, k, n).unwrap();
        prop_assert!(value.magnitude() <= total.magnitude());
    }
}
