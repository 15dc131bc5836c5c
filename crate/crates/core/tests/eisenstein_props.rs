use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use macmahon_core::eisenstein::{
    coprime_g, decompose_in_basis, default_probe, delta2, delta3, e2n, eisenstein_e, eisenstein_g, eisenstein_g_full,
    eta_product, level2_quasimodular_basis, DecompositionError, DecompositionStatus, EtaProductSpec,
};
use macmahon_core::{QSeries, Rational, ResidueClassSet, SignEps};

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q ∏ (1-q^j)^8 (1-q^{2j})^8` by repeated multiplication with binomial rows.
fn delta2_oracle(order: usize) -> Vec<i64> {
    let mut poly = vec![0i64; order + 1];
    poly[1] = 1;
    for (step, power) in [(1usize, 8u32), (2, 8)] {
        let mut j = 1;
        while j * step <= order {
            for _ in 0..power {
                for i in (j * step..=order).rev() {
                    poly[i] -= poly[i - j * step];
                }
            }
            j += 1;
        }
    }
    poly
}

#[test]
fn eisenstein_examples() {
    assert_eq!(eisenstein_g_full(2, 4), QSeries::from_integers([0, 1, 3, 4, 7]));
    assert_eq!(coprime_g(2, 2, 4).coeff(4), &int(4));
    assert_eq!(eisenstein_e(2, 2), QSeries::from_integers([1, -24, -72]));
    assert_eq!(eisenstein_e(4, 1).coeff(1), &int(240));
    assert_eq!(coprime_g(1, 4, 30), eisenstein_g_full(4, 30));
}

#[test]
fn coprime_g_matches_divisor_oracle() {
    for modulus in 1..=6u64 {
        for k in [2u32, 4, 6] {
            let g = coprime_g(modulus, k, 80);
            for n in 1..=80u64 {
                let want: i128 = (1..=n)
                    .filter(|d| n % d == 0 && (n / d).gcd(&modulus) == 1)
                    .map(|d| (d as i128).pow(k - 1))
                    .sum();
                assert_eq!(g.coeff(n as usize), &Rational::from_integer(BigInt::from(want)), "N={modulus}, k={k}, n={n}");
            }
        }
    }
}

#[test]
fn e2n_is_the_stated_combination() {
    for modulus in 1..=6u64 {
        let e2 = eisenstein_e(2, 40);
        let rhs = &e2 - &e2.dilate(modulus as usize).scale_int(modulus as i64);
        assert_eq!(e2n(modulus, 40), rhs);
    }
}

#[test]
fn eta_products() {
    let d2 = delta2(60);
    let oracle = delta2_oracle(60);
    for n in 0..=60 {
        assert_eq!(d2.coeff(n), &int(oracle[n]), "a({n})");
    }
    assert_eq!(d2.coeff(2), &int(-8));
    assert_eq!(delta3(10).coeff(1), &int(1));
    assert!(delta3(10).coeff(0).is_zero());
    let inverse = eta_product(&EtaProductSpec::new(vec![(1, -1)], 0).unwrap(), 10);
    // 1/∏(1-q^j) is the partition generating function.
    assert_eq!(inverse, QSeries::from_integers([1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]));
    assert!(EtaProductSpec::new(vec![(1, 2), (1, 3)], 1).is_err());
    assert!(EtaProductSpec::new(vec![(0, 2)], 1).is_err());
}

#[test]
fn basis_element_gives_a_unit_vector() {
    let basis: Vec<QSeries> = level2_quasimodular_basis(6, 50).into_iter().map(|b| b.series).collect();
    for (i, target) in basis.iter().enumerate() {
        let res = decompose_in_basis(target, &basis, default_probe(basis.len())).unwrap();
        assert_eq!(res.status, DecompositionStatus::ExactMatch);
        for (j, c) in res.coefficients.iter().enumerate() {
            assert_eq!(*c, if i == j { Rational::one() } else { Rational::zero() });
        }
    }
}

#[test]
fn decomposition_round_trip_and_mismatch() {
    let order = 50;
    let basis: Vec<QSeries> = level2_quasimodular_basis(8, order).into_iter().map(|b| b.series).collect();
    let weights = [3, -1, 0, 2, 5, -7, 1, 0, 0, 4, 1, -2, 6, 0, 1, 1, -1, 2, 0, 3, 1];
    let mut target = QSeries::zero(order);
    for (b, w) in basis.iter().zip(weights) {
        target = &target + &b.scale(&Rational::new(BigInt::from(w), BigInt::from(7)));
    }
    let res = decompose_in_basis(&target, &basis, default_probe(basis.len())).unwrap();
    assert_eq!(res.status, DecompositionStatus::ExactMatch);
    let mut rebuilt = QSeries::zero(order);
    for (b, c) in basis.iter().zip(&res.coefficients) {
        rebuilt = &rebuilt + &b.scale(c);
    }
    assert_eq!(rebuilt, target);

    let mut perturbed = target.clone();
    perturbed.set_coeff(45, perturbed.coeff(45) + Rational::one());
    let res = decompose_in_basis(&perturbed, &basis, default_probe(basis.len())).unwrap();
    assert_eq!(res.status, DecompositionStatus::Mismatch(45));

    let g = eisenstein_g(&ResidueClassSet::units(3).unwrap(), SignEps::Plus, 4, order);
    let short = &basis[..3];
    assert!(matches!(
        decompose_in_basis(&g, short, 2),
        Err(DecompositionError::ProbeTooShort { .. })
    ));
    assert!(matches!(decompose_in_basis(&g, &[], 4), Err(DecompositionError::EmptyBasis)));
}
