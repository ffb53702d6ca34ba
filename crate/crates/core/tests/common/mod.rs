//! Brute-force oracles, written independently of the library's enumeration,
//! compass generation and accumulation.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub type Blocks = Vec<Vec<u32>>;

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn bracketings(word: &[u32]) -> Vec<Blocks> {
    match word {
        [] => vec![vec![]],
        [x] => vec![vec![vec![*x]]],
        [x, y, rest @ ..] => {
            let mut out = Vec::new();
            for mut tail in bracketings(&word[1..]) {
                tail.insert(0, vec![*x]);
                out.push(tail);
            }
            for mut tail in bracketings(rest) {
                let mut pair = vec![*x, *y];
                pair.sort_unstable();
                tail.insert(0, pair);
                out.push(tail);
            }
            out
        }
    }
}

/// Every ordered partition of `{1..n}` into blocks of size 1 or 2, obtained by
/// bracketing adjacent letters of every permutation and deduplicating.
pub fn ordered_partitions(n: u32) -> BTreeSet<Blocks> {
    let items: Vec<u32> = (1..=n).collect();
    permutations(&items)
        .iter()
        .flat_map(|p| bracketings(p))
        .collect()
}

/// Tangent characters read off the chain `I_0 ⊂ … ⊂ I_r` directly.
pub fn compass_from_chain(n: u32, blocks: &Blocks) -> BTreeSet<Vec<i32>> {
    let n = n as usize;
    let mut chain: Vec<BTreeSet<u32>> = vec![BTreeSet::new()];
    for b in blocks {
        let mut next = chain.last().unwrap().clone();
        next.extend(b.iter().copied());
        chain.push(next);
    }
    let e = |terms: &[(u32, i32)]| {
        let mut v = vec![0i32; n];
        for &(i, c) in terms {
            v[i as usize - 1] += c;
        }
        v
    };
    let step = |s: usize| -> Vec<u32> { chain[s + 1].difference(&chain[s]).copied().collect() };

    let mut out = BTreeSet::new();
    for set in &chain {
        for &i in set {
            for j in 1..=n as u32 {
                if !set.contains(&j) {
                    out.insert(e(&[(i, 1), (j, -1)]));
                }
            }
        }
    }
    let r = blocks.len();
    for s in 0..r {
        let d = step(s);
        if d.len() == 2 {
            out.insert(e(&[(d[0], 1), (d[1], -1)]));
            out.insert(e(&[(d[1], 1), (d[0], -1)]));
        }
    }
    for s in 0..r.saturating_sub(1) {
        let (d1, d2) = (step(s), step(s + 1));
        let ch = match (d1.len(), d2.len()) {
            (1, 1) => e(&[(d1[0], 2), (d2[0], -2)]),
            (1, 2) => e(&[(d1[0], 2), (d2[0], -1), (d2[1], -1)]),
            (2, 1) => e(&[(d1[0], 1), (d1[1], 1), (d2[0], -2)]),
            _ => e(&[(d1[0], 1), (d1[1], 1), (d2[0], -1), (d2[1], -1)]),
        };
        out.insert(ch);
    }
    out
}

/// Sum over all points of `(−w(first))^a (w(last))^b / ∏ ⟨−χ, w⟩`, using
/// `BigRational` addition throughout.
pub fn phi_brute_force(n: u32, a: u32, weights: &[i64]) -> BigRational {
    let dim = n * (n + 1) / 2 - 1;
    let (ea, eb) = (a - 1, dim + 1 - a);
    let bw = |b: &Vec<u32>| -> i64 {
        if b.len() == 1 {
            2 * weights[b[0] as usize - 1]
        } else {
            weights[b[0] as usize - 1] + weights[b[1] as usize - 1]
        }
    };
    let mut total = BigRational::zero();
    for blocks in ordered_partitions(n) {
        let chars = compass_from_chain(n, &blocks);
        assert_eq!(chars.len() as u32, dim, "oracle compass size for {blocks:?}");
        let mut num = BigInt::from(1);
        for _ in 0..ea {
            num *= -bw(&blocks[0]);
        }
        for _ in 0..eb {
            num *= bw(blocks.last().unwrap());
        }
        let mut den = BigInt::from(1);
        for ch in &chars {
            let pairing: i64 = ch.iter().zip(weights).map(|(&c, &w)| c as i64 * w).sum();
            den *= -pairing;
        }
        total += BigRational::new(num, den);
    }
    total
}

pub fn pow2_weights(n: u32) -> Vec<i64> {
    (1..=n).map(|i| 1i64 << i).collect()
}

/// κ(n) from `n!·((1+√3)^{n+1} − (1−√3)^{n+1}) / (2^{n+1}·√3)`, evaluated
/// exactly in ℤ[√3]: with `(1+√3)^m = A + B√3` the expression is `n!·B / 2^n`.
pub fn kappa_closed_form_exact(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(0));
    for _ in 0..=n {
        let na = &a + &b * 3;
        let nb = &a + &b;
        a = na;
        b = nb;
    }
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let value = fact * b;
    let two_n = BigInt::from(1) << n as usize;
    assert!((&value % &two_n).is_zero());
    value / two_n
}

/// The same closed form in floating point, rounded.
pub fn kappa_closed_form_f64(n: u32) -> f64 {
    let s3 = 3f64.sqrt();
    let m = (n + 1) as i32;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    (fact * ((1.0 + s3).powi(m) - (1.0 - s3).powi(m)) / (2f64.powi(m) * s3)).round()
}

/// φ rows for n = 1..=6, produced by an independent script summing exact
/// fractions over all fixed points.
pub const FROZEN_ROWS: [&[u64]; 6] = [
    &[1],
    &[1, 1, 1],
    &[1, 2, 4, 4, 2, 1],
    &[1, 3, 9, 17, 21, 21, 17, 9, 3, 1],
    &[1, 4, 16, 44, 86, 137, 188, 212, 188, 137, 86, 44, 16, 4, 1],
    &[
        1, 5, 25, 90, 240, 528, 1016, 1696, 2396, 2886, 3054, 2886, 2396, 1696, 1016, 528, 240,
        90, 25, 5, 1,
    ],
];
