use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use macmahon_core::detector::{
    classify_lelievre, detect_range, evaluate_expression, lattice_reduced_form, lelievre_coeff,
};
use macmahon_core::numtheory::{is_prime, sigma};
use macmahon_core::{Backend, ExpressionId, Sign};

fn lelievre_oracle(modulus: u64, k: u32, l: u32, n: u64) -> BigInt {
    let nb = BigInt::from(n);
    (1..=n)
        .filter(|d| n % d == 0 && (n / d).gcd(&modulus) == 1)
        .map(|d| {
            let db = BigInt::from(d);
            (nb.pow(l) + 1) * db.pow(k) - (nb.pow(k) + 1) * db.pow(l)
        })
        .sum()
}

#[test]
fn documented_lelievre_values() {
    assert_eq!(lelievre_coeff(1, 1, 3, 5).unwrap(), BigInt::from(0));
    assert_eq!(lelievre_coeff(1, 1, 3, 4).unwrap(), BigInt::from(90));
    assert_eq!(lelievre_coeff(2, 1, 3, 2).unwrap(), BigInt::from(-6));
    assert_eq!(classify_lelievre(1, 1, 3, 7).unwrap().sign, Sign::Zero);
    assert_eq!(classify_lelievre(2, 1, 3, 8).unwrap().sign, Sign::Negative);
    assert_eq!(classify_lelievre(2, 1, 3, 12).unwrap().sign, Sign::Positive);
    assert!(lelievre_coeff(1, 3, 3, 5).is_err());
}

#[test]
fn lattice_values_match_divisor_form() {
    for (id, a) in [(ExpressionId::Lattice1Mod4, 1u64), (ExpressionId::Lattice3Mod4, 3)] {
        for n in 2..=400u64 {
            let gated = if n % 4 == a { sigma(1, n).unwrap() } else { BigInt::from(0) };
            let expected = 240 * (BigInt::from(n * n - n + 1) * gated - sigma(3, n).unwrap());
            let value = evaluate_expression(id, n, Backend::Formula).unwrap().value;
            assert_eq!(value, expected, "{id} at n = {n}");
            assert_eq!(Sign::of(&value), Sign::of(&lattice_reduced_form(a, n)), "{id} at n = {n}");
        }
    }
}

#[test]
fn lattice_zeros_at_primes_one_mod_four() {
    let report = detect_range(ExpressionId::Lattice1Mod4, 2, 100, Backend::Formula).unwrap();
    assert!(report.violations.is_empty());
    for row in &report.rows {
        assert_eq!(row.outcome.sign == Sign::Zero, is_prime(row.n) && row.n % 4 == 1, "n = {}", row.n);
    }
}

#[test]
fn single_row_table() {
    for id in ExpressionId::NAMED {
        let report = detect_range(id, 2, 2, Backend::Formula).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].n, 2);
    }
    assert!(detect_range(ExpressionId::Level1Quadratic, 1, 5, Backend::Formula).is_err());
    assert!(detect_range(ExpressionId::Level1Quadratic, 9, 5, Backend::Formula).is_err());
}

#[test]
fn backends_agree_to_sixty() {
    let mut ids: Vec<ExpressionId> = ExpressionId::NAMED.to_vec();
    ids.push(ExpressionId::lelievre(2, 1, 3).unwrap());
    ids.push(ExpressionId::lelievre(6, 3, 5).unwrap());
    for id in ids {
        let formula = detect_range(id, 2, 60, Backend::Formula).unwrap();
        let brute = detect_range(id, 2, 60, Backend::BruteForce).unwrap();
        assert!(formula.violations.is_empty() && brute.violations.is_empty(), "{id}");
        for (f, b) in formula.rows.iter().zip(&brute.rows) {
            assert_eq!(f.value, b.value, "{id} at n = {}", f.n);
        }
    }
}

#[test]
fn names_round_trip() {
    let mut ids: Vec<ExpressionId> = ExpressionId::NAMED.to_vec();
    ids.push(ExpressionId::lelievre(4, 1, 5).unwrap());
    for id in ids {
        assert_eq!(id.to_string().parse::<ExpressionId>().unwrap(), id);
    }
}

proptest! {
    #[test]
    fn lelievre_matches_direct_sum(modulus in 1u64..=12, k in 1u32..=4, extra in 1u32..=3, n in 2u64..=600) {
        let l = k + extra;
        prop_assert_eq!(lelievre_coeff(modulus, k, l, n).unwrap(), lelievre_oracle(modulus, k, l, n));
        let outcome = classify_lelievre(modulus, k, l, n).unwrap();
        prop_assert_eq!(outcome, ExpressionId::lelievre(modulus, k, l).unwrap().expected(n));
    }
}
