//! Tangent characters ("compass") of the torus action at a fixed point.
//!
//! Each character is written `Σ cᵢ εᵢ`. At the point with blocks
//! `B₁, …, B_r` the tangent space decomposes into:
//!
//! 1. `εᵢ − εⱼ` for `i` in a strictly earlier block than `j`;
//! 2. `2εᵢ − 2εⱼ` for consecutive singletons `{i}, {j}`;
//! 3. `εᵢ − εⱼ` and `εⱼ − εᵢ` for each pair block `{i, j}`;
//! 4. `2ε_k − εᵢ − εⱼ` for a singleton `{k}` followed by a pair `{i, j}`;
//! 5. `εᵢ + εⱼ − 2ε_k` for a pair `{i, j}` followed by a singleton `{k}`;
//! 6. `ε_{i'} + ε_{j'} − εᵢ − εⱼ` for a pair `{i', j'}` followed by a pair `{i, j}`.
//!
//! Cases 2, 4, 5 and 6 are all `w(B_s) − w(B_{s+1})` where the block weight is
//! `w({i}) = 2εᵢ` and `w({i, j}) = εᵢ + εⱼ`.

use std::collections::HashSet;
use std::fmt;

use crate::chains::{Block, FixedPoint};
use crate::error::{Error, Result};

/// An integer combination of the basis characters `ε₁..εₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(Vec<i32>);

impl Character {
    pub fn new(coeffs: Vec<i32>) -> Self {
        Character(coeffs)
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.0.iter().map(|&c| c as i64).sum()
    }

    pub fn negated(&self) -> Character {
        Character(self.0.iter().map(|c| -c).collect())
    }

    /// `⟨χ, w⟩ = Σ cᵢ·wᵢ`.
    pub fn pair_with<T>(&self, weights: &[T]) -> T
    where
        T: Clone + num_traits::Zero + std::ops::Mul<i64, Output = T>,
    {
        self.0
            .iter()
            .zip(weights)
            .filter(|(c, _)| **c != 0)
            .fold(T::zero(), |acc, (c, w)| acc + w.clone() * (*c as i64))
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}e{}", k + 1)?;
            } else {
                write!(f, "{sign}{mag}e{}", k + 1)?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The case of the tangent decomposition a character comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Case {
    CrossBlock = 1,
    SingleSingle = 2,
    WithinPair = 3,
    SinglePair = 4,
    PairSingle = 5,
    PairPair = 6,
}

/// A compass character in structural form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    /// `εᵢ − εⱼ`.
    IndexDiff(u32, u32),
    /// `w(A) − w(B)` with block weights as in the module docs.
    BlockDiff(Block, Block),
}

impl Term {
    pub fn to_character(self, n: u32) -> Character {
        let mut c = vec![0i32; n as usize];
        match self {
            Term::IndexDiff(i, j) => {
                c[i as usize - 1] += 1;
                c[j as usize - 1] -= 1;
            }
            Term::BlockDiff(a, b) => {
                add_block_weight(&mut c, a, 1);
                add_block_weight(&mut c, b, -1);
            }
        }
        Character(c)
    }
}

fn add_block_weight(c: &mut [i32], block: Block, sign: i32) {
    match block {
        Block::Single(i) => c[i as usize - 1] += 2 * sign,
        Block::Pair(i, j) => {
            c[i as usize - 1] += sign;
            c[j as usize - 1] += sign;
        }
    }
}

/// Visits every compass term of the chain `blocks` exactly once. Terms come
/// grouped as case 1, case 3, then the consecutive-block cases by position.
pub fn for_each_term<F: FnMut(Case, Term)>(blocks: &[Block], mut visit: F) {
    for (s, earlier) in blocks.iter().enumerate() {
        for later in &blocks[s + 1..] {
            let (i1, i2) = earlier.as_pair();
            let (j1, j2) = later.as_pair();
            visit(Case::CrossBlock, Term::IndexDiff(i1, j1));
            if j2 != j1 {
                visit(Case::CrossBlock, Term::IndexDiff(i1, j2));
            }
            if i2 != i1 {
                visit(Case::CrossBlock, Term::IndexDiff(i2, j1));
                if j2 != j1 {
                    visit(Case::CrossBlock, Term::IndexDiff(i2, j2));
                }
            }
        }
    }
    for block in blocks {
        if let Block::Pair(i, j) = *block {
            visit(Case::WithinPair, Term::IndexDiff(i, j));
            visit(Case::WithinPair, Term::IndexDiff(j, i));
        }
    }
    for w in blocks.windows(2) {
        let case = match (w[0], w[1]) {
            (Block::Single(_), Block::Single(_)) => Case::SingleSingle,
            (Block::Single(_), Block::Pair(..)) => Case::SinglePair,
            (Block::Pair(..), Block::Single(_)) => Case::PairSingle,
            (Block::Pair(..), Block::Pair(..)) => Case::PairPair,
        };
        visit(case, Term::BlockDiff(w[0], w[1]));
    }
}

/// `C(n+1, 2) − 1`, the dimension of the variety and the size of every compass.
pub fn dimension(n: u32) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2 - 1
}

/// The compass of `p` together with the case each character comes from,
/// ordered by case, then block position, then index.
pub fn compass_with_cases(p: &FixedPoint) -> Result<Vec<(Case, Character)>> {
    let mut out = Vec::with_capacity(dimension(p.n()) as usize);
    for_each_term(p.blocks(), |case, term| {
        out.push((case, term.to_character(p.n())))
    });
    out.sort_by_key(|(case, _)| *case);

    if out.len() as u64 != dimension(p.n()) {
        return Err(Error::Internal(format!(
            "compass of {p} has {} characters, expected {}",
            out.len(),
            dimension(p.n())
        )));
    }
    let mut seen = HashSet::with_capacity(out.len());
    for (_, ch) in &out {
        if ch.is_zero() || !seen.insert(ch) {
            return Err(Error::Internal(format!(
                "compass of {p} has a zero or repeated character {ch}"
            )));
        }
    }
    Ok(out)
}

/// The tangent characters at `p`.
pub fn compass(p: &FixedPoint) -> Result<Vec<Character>> {
    Ok(compass_with_cases(p)?.into_iter().map(|(_, c)| c).collect())
}
