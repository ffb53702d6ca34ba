mod common;

use std::collections::BTreeSet;

use mldegree::chains::prefixes;
use mldegree::compass::dimension;
use mldegree::localization::localization_sums;
use mldegree::{
    compass, contribution, default_subgroup, enumerate_fixed_points, kappa, ml_degree,
    ml_degree_row, random_subgroup, FixedPoint, Parallelism,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

#[test]
fn enumeration_matches_brute_force_partitions() {
    for n in 1..=6 {
        let ours: BTreeSet<Vec<Vec<u32>>> = enumerate_fixed_points(n)
            .unwrap()
            .map(|p| p.index_sets())
            .collect();
        assert_eq!(ours, common::ordered_partitions(n), "n = {n}");
    }
}

#[test]
fn kappa_matches_closed_form() {
    for n in 1..=12 {
        let k = kappa(n);
        assert_eq!(BigInt::from(k.clone()), common::kappa_closed_form_exact(n), "n = {n}");
        assert_eq!(k, BigUint::from(common::kappa_closed_form_f64(n) as u64), "n = {n}");
    }
    for n in 13..=40 {
        assert_eq!(BigInt::from(kappa(n)), common::kappa_closed_form_exact(n), "n = {n}");
    }
}

#[test]
fn enumeration_count_matches_kappa() {
    for n in 1..=9 {
        let mut it = enumerate_fixed_points(n).unwrap();
        let mut count = 0u64;
        while it.advance() {
            count += 1;
        }
        assert_eq!(BigUint::from(count), kappa(n), "n = {n}");
    }
}

#[test]
fn compass_matches_chain_definition() {
    for n in 1..=6 {
        for p in enumerate_fixed_points(n).unwrap() {
            let ours: BTreeSet<Vec<i32>> = compass(&p)
                .unwrap()
                .into_iter()
                .map(|c| c.coeffs().to_vec())
                .collect();
            assert_eq!(ours, common::compass_from_chain(n, &p.index_sets()), "{p}");
        }
    }
}

#[test]
fn rows_match_brute_force_oracle() {
    for n in 1..=4 {
        let row = ml_degree_row(n, None, Parallelism::default()).unwrap();
        let w = common::pow2_weights(n);
        for (k, phi) in row.iter().enumerate() {
            let oracle = common::phi_brute_force(n, k as u32 + 1, &w);
            assert_eq!(BigRational::from_integer(BigInt::from(phi.clone())), oracle);
        }
    }
}

#[test]
fn rows_match_frozen_values() {
    for (k, expected) in common::FROZEN_ROWS.iter().enumerate() {
        let n = k as u32 + 1;
        let row = ml_degree_row(n, None, Parallelism::default()).unwrap();
        let want: Vec<BigUint> = expected.iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(row, want, "n = {n}");
    }
}

#[test]
fn worked_values() {
    assert_eq!(ml_degree(2, 2, None).unwrap(), BigUint::from(1u32));
    assert_eq!(ml_degree(3, 2, None).unwrap(), BigUint::from(2u32));
    assert_eq!(ml_degree(4, 4, None).unwrap(), BigUint::from(17u32));
}

#[test]
fn n2_contributions_sum_to_one() {
    // −4 − 4 + 9 with weights (2, 4).
    let s = default_subgroup(2).unwrap();
    let total: BigRational = enumerate_fixed_points(2)
        .unwrap()
        .map(|p| contribution(&p, 1, 1, &s).unwrap().into_inner())
        .sum();
    assert_eq!(total, BigRational::from_integer(1.into()));
}

#[test]
fn streaming_engine_matches_per_point_route() {
    for n in 1..=5u32 {
        for s in [
            default_subgroup(n).unwrap(),
            random_subgroup(n, 11, 500).unwrap(),
        ] {
            let dim = dimension(n) as u32;
            let a_values: Vec<u32> = (1..=dim + 1).collect();
            let fast = localization_sums(n, &a_values, Some(&s), Parallelism::default()).unwrap();
            for (slot, &a) in a_values.iter().enumerate() {
                let slow: BigRational = enumerate_fixed_points(n)
                    .unwrap()
                    .map(|p| contribution(&p, a - 1, dim + 1 - a, &s).unwrap().into_inner())
                    .fold(BigRational::zero(), |acc, c| acc + c);
                assert_eq!(fast.sums[slot], slow, "n = {n}, a = {a}, s = {s}");
            }
        }
    }
}

#[test]
fn prefix_units_cover_every_point_once() {
    let n = 6;
    let total: usize = prefixes(n, 2)
        .unwrap()
        .into_iter()
        .map(|pre| mldegree::FixedPoints::with_prefix(n, pre).unwrap().count())
        .sum();
    assert_eq!(BigUint::from(total), kappa(n));
}

#[test]
fn golden_compass() {
    let p = FixedPoint::from_index_sets(3, &[vec![1], vec![2], vec![3]]).unwrap();
    let got: Vec<Vec<i32>> = compass(&p).unwrap().into_iter().map(|c| c.coeffs().to_vec()).collect();
    assert_eq!(
        got,
        vec![
            vec![1, -1, 0],
            vec![1, 0, -1],
            vec![0, 1, -1],
            vec![2, -2, 0],
            vec![0, 2, -2]
        ]
    );
}
