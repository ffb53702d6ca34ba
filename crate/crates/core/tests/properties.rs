use std::collections::BTreeSet;

use mldegree::compass::dimension;
use mldegree::localization::localization_sums;
use mldegree::{
    compass, enumerate_fixed_points, interpolate_phi, kappa, random_subgroup, Block, FixedPoint,
    Parallelism,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn nth_point(n: u32, idx: usize) -> FixedPoint {
    let k = kappa(n).to_usize().unwrap();
    enumerate_fixed_points(n).unwrap().nth(idx % k).unwrap()
}

fn char_set(p: &FixedPoint) -> BTreeSet<Vec<i32>> {
    compass(p).unwrap().into_iter().map(|c| c.coeffs().to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compass_shape(n in 1u32..=7, idx in any::<usize>()) {
        let p = nth_point(n, idx);
        let chars = compass(&p).unwrap();
        prop_assert_eq!(chars.len() as u64, dimension(n));
        for c in &chars {
            prop_assert_eq!(c.coefficient_sum(), 0);
            let nonzero: Vec<i32> = c.coeffs().iter().copied().filter(|&x| x != 0).collect();
            prop_assert!(!nonzero.is_empty() && nonzero.len() <= 4);
            prop_assert!(nonzero.iter().all(|x| [-2, -1, 1, 2].contains(x)));
        }
    }

    #[test]
    fn reversal_negates_compass(n in 1u32..=7, idx in any::<usize>()) {
        let p = nth_point(n, idx);
        let negated: BTreeSet<Vec<i32>> = compass(&p)
            .unwrap()
            .into_iter()
            .map(|c| c.negated().coeffs().to_vec())
            .collect();
        prop_assert_eq!(negated, char_set(&p.reversed()));
    }

    #[test]
    fn permutation_compass(perm in Just((1u32..=6).collect::<Vec<_>>()).prop_shuffle()) {
        let n = perm.len();
        let blocks: Vec<Block> = perm.iter().map(|&i| Block::Single(i)).collect();
        let p = FixedPoint::new(n as u32, blocks).unwrap();
        let mut want = BTreeSet::new();
        for s in 0..n {
            for t in s + 1..n {
                let mut v = vec![0; n];
                v[perm[s] as usize - 1] = 1;
                v[perm[t] as usize - 1] = -1;
                want.insert(v);
            }
        }
        for s in 0..n - 1 {
            let mut v = vec![0; n];
            v[perm[s] as usize - 1] = 2;
            v[perm[s + 1] as usize - 1] = -2;
            want.insert(v);
        }
        prop_assert_eq!(char_set(&p), want);
    }

    #[test]
    fn sums_do_not_depend_on_the_subgroup(n in 1u32..=4, seed in any::<u64>(), bound in 50u64..5000) {
        let a_values: Vec<u32> = (1..=dimension(n) as u32 + 1).collect();
        let base = localization_sums(n, &a_values, None, Parallelism::default()).unwrap();
        let s = random_subgroup(n, seed, bound).unwrap();
        let other = localization_sums(n, &a_values, Some(&s), Parallelism::default()).unwrap();
        prop_assert_eq!(base.sums, other.sums);
    }

    #[test]
    fn fixed_point_json_round_trip(n in 1u32..=6, idx in any::<usize>()) {
        let p = nth_point(n, idx);
        let back: FixedPoint = serde_json::from_str(&p.to_json_line()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn interpolation_recovers_polynomials(
        coeffs in prop::collection::vec((-50i64..50, 1i64..8), 1..6),
        start in -5i64..5,
        extra in 0usize..3,
    ) {
        let poly: Vec<BigRational> = coeffs
            .iter()
            .map(|&(p, q)| BigRational::new(p.into(), q.into()))
            .collect();
        let eval = |x: i64| {
            let x = BigRational::from_integer(x.into());
            poly.iter().rev().fold(BigRational::from_integer(0.into()), |acc, c| acc * &x + c)
        };
        // Scale to integer values so samples are exact integers.
        let scale: i64 = 840;
        let a = poly.len() as u32;
        let samples: Vec<(i64, BigInt)> = (0..a as i64 + extra as i64)
            .map(|k| {
                let x = start + k;
                let y = eval(x) * BigRational::from_integer(scale.into());
                (x, y.to_integer())
            })
            .collect();
        let fitted = interpolate_phi(a, &samples).unwrap();
        for (got, want) in fitted.coeffs().iter().zip(&poly) {
            prop_assert_eq!(got, &(want * BigRational::from_integer(scale.into())));
        }
    }
}
