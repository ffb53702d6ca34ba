//! Torus-fixed points of the variety of complete quadrics.
//!
//! A fixed point is an ascending chain `∅ = I₀ ⊂ I₁ ⊂ … ⊂ I_r = {1..n}` whose
//! steps add one or two indices. It is stored as the sequence of steps
//! (blocks), so a fixed point is an ordered partition of `{1..n}` into blocks
//! of size 1 or 2.
//!
//! Enumeration order is lexicographic on the sequence of sorted blocks, e.g.
//! for `n = 2`: `({1},{2})`, `({1,2})`, `({2},{1})`.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One step of an ascending chain. Indices are 1-based; a pair is stored with
/// its smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Single(u32),
    Pair(u32, u32),
}

impl Block {
    /// Builds a block from a slice of one or two distinct indices.
    pub fn from_indices(indices: &[u32]) -> Result<Self> {
        match *indices {
            [i] => Ok(Block::Single(i)),
            [i, j] if i != j => Ok(Block::Pair(i.min(j), i.max(j))),
            _ => Err(Error::InvalidArgument(format!(
                "a block must hold one or two distinct indices, got {indices:?}"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Block::Single(_) => 1,
            Block::Pair(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest index of the block.
    pub fn min(&self) -> u32 {
        match *self {
            Block::Single(i) | Block::Pair(i, _) => i,
        }
    }

    /// The pair `(i, i')` with `i = i'` for a singleton.
    pub fn as_pair(&self) -> (u32, u32) {
        match *self {
            Block::Single(i) => (i, i),
            Block::Pair(i, j) => (i, j),
        }
    }

    pub fn indices(&self) -> Vec<u32> {
        match *self {
            Block::Single(i) => vec![i],
            Block::Pair(i, j) => vec![i, j],
        }
    }

    pub fn contains(&self, k: u32) -> bool {
        match *self {
            Block::Single(i) => i == k,
            Block::Pair(i, j) => i == k || j == k,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Single(i) => write!(f, "{{{i}}}"),
            Block::Pair(i, j) => write!(f, "{{{i},{j}}}"),
        }
    }
}

/// A torus-fixed point, i.e. an ordered partition of `{1..n}` into blocks of
/// size 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FixedPointRecord", into = "FixedPointRecord")]
pub struct FixedPoint {
    n: u32,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct FixedPointRecord {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl TryFrom<FixedPointRecord> for FixedPoint {
    type Error = Error;

    fn try_from(rec: FixedPointRecord) -> Result<Self> {
        FixedPoint::from_index_sets(rec.n, &rec.blocks)
    }
}

impl From<FixedPoint> for FixedPointRecord {
    fn from(p: FixedPoint) -> Self {
        FixedPointRecord {
            n: p.n,
            blocks: p.blocks.iter().map(Block::indices).collect(),
        }
    }
}

impl FixedPoint {
    /// Validates that `blocks` partition `{1..n}`.
    pub fn new(n: u32, blocks: Vec<Block>) -> Result<Self> {
        check_n(n)?;
        let mut seen = vec![false; n as usize + 1];
        for block in &blocks {
            for k in block.indices() {
                if k == 0 || k > n {
                    return Err(Error::InvalidArgument(format!(
                        "index {k} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut seen[k as usize], true) {
                    return Err(Error::InvalidArgument(format!(
                        "index {k} appears in more than one block"
                    )));
                }
            }
        }
        if let Some(k) = (1..=n).find(|&k| !seen[k as usize]) {
            return Err(Error::InvalidArgument(format!(
                "index {k} is not covered by any block"
            )));
        }
        Ok(FixedPoint { n, blocks })
    }

    /// Builds a fixed point from plain index sets, e.g. `[[1], [2, 3]]`.
    pub fn from_index_sets<S: AsRef<[u32]>>(n: u32, sets: &[S]) -> Result<Self> {
        let blocks = sets
            .iter()
            .map(|s| Block::from_indices(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        FixedPoint::new(n, blocks)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn first_block(&self) -> Block {
        self.blocks[0]
    }

    pub fn last_block(&self) -> Block {
        self.blocks[self.blocks.len() - 1]
    }

    /// The ascending chain `I₀ ⊂ I₁ ⊂ … ⊂ I_r`, each set sorted ascending.
    pub fn chain(&self) -> Vec<Vec<u32>> {
        let mut chain = Vec::with_capacity(self.blocks.len() + 1);
        let mut current = Vec::new();
        chain.push(current.clone());
        for block in &self.blocks {
            current.extend(block.indices());
            current.sort_unstable();
            chain.push(current.clone());
        }
        chain
    }

    /// The same blocks in reverse chain order.
    pub fn reversed(&self) -> FixedPoint {
        let mut blocks = self.blocks.clone();
        blocks.reverse();
        FixedPoint { n: self.n, blocks }
    }

    /// Blocks as nested index arrays, the shape used in JSON exports.
    pub fn index_sets(&self) -> Vec<Vec<u32>> {
        self.blocks.iter().map(Block::indices).collect()
    }

    /// One JSON-lines record: `{"n":3,"blocks":[[1],[2,3]]}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("fixed point serializes")
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// Number of torus-fixed points, `κ(n) = n·κ(n−1) + C(n,2)·κ(n−2)` with
/// `κ(0) = κ(1) = 1`.
pub fn kappa(n: u32) -> BigUint {
    let mut prev = BigUint::from(1u32); // κ(k-2)
    let mut cur = BigUint::from(1u32); // κ(k-1)
    for k in 2..=n as u64 {
        let next = &cur * k + &prev * (k * (k - 1) / 2);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Streams all fixed points for `n` in canonical order.
pub fn enumerate_fixed_points(n: u32) -> Result<FixedPoints> {
    FixedPoints::with_prefix(n, Vec::new())
}

/// The possible first blocks in canonical order. Enumerating
/// [`FixedPoints::with_prefix`] for each of them in turn reproduces
/// [`enumerate_fixed_points`].
pub fn first_blocks(n: u32) -> Result<Vec<Block>> {
    check_n(n)?;
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(Block::Single(i));
        out.extend((i + 1..=n).map(|j| Block::Pair(i, j)));
    }
    Ok(out)
}

/// All valid chain prefixes of `depth` blocks (or complete points, if shorter)
/// in canonical order. Used to split enumeration into independent work units.
pub fn prefixes(n: u32, depth: usize) -> Result<Vec<Vec<Block>>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut used = vec![false; n as usize + 1];
    let mut stack = Vec::with_capacity(depth);
    collect_prefixes(n, depth, &mut used, &mut stack, &mut out);
    Ok(out)
}

fn collect_prefixes(
    n: u32,
    depth: usize,
    used: &mut [bool],
    stack: &mut Vec<Block>,
    out: &mut Vec<Vec<Block>>,
) {
    let remaining = used[1..].iter().filter(|u| !**u).count();
    if stack.len() == depth || remaining == 0 {
        out.push(stack.clone());
        return;
    }
    let mut next = first_candidate(used);
    while let Some(block) = next {
        mark(used, block, true);
        stack.push(block);
        collect_prefixes(n, depth, used, stack, out);
        stack.pop();
        mark(used, block, false);
        next = next_candidate(used, block);
    }
}

/// Streaming iterator over fixed points sharing a fixed prefix of blocks.
///
/// Holds only the current chain, so memory stays `O(n)` regardless of how many
/// points are produced.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    n: u32,
    floor: usize,
    used: Vec<bool>,
    blocks: Vec<Block>,
    started: bool,
    done: bool,
}

impl FixedPoints {
    /// Enumerates the points whose chain begins with `prefix`.
    pub fn with_prefix(n: u32, prefix: Vec<Block>) -> Result<Self> {
        check_n(n)?;
        let mut used = vec![false; n as usize + 1];
        for block in &prefix {
            for k in block.indices() {
                if k == 0 || k > n || used[k as usize] {
                    return Err(Error::InvalidArgument(format!(
                        "prefix {prefix:?} is not a valid partial chain for n = {n}"
                    )));
                }
                used[k as usize] = true;
            }
        }
        Ok(FixedPoints {
            n,
            floor: prefix.len(),
            used,
            blocks: prefix,
            started: false,
            done: false,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn fill(&mut self) {
        while let Some(block) = first_candidate(&self.used) {
            mark(&mut self.used, block, true);
            self.blocks.push(block);
        }
    }

    /// Advances to the next point in place; returns `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return true;
        }
        while self.blocks.len() > self.floor {
            let block = self.blocks.pop().expect("non-empty");
            mark(&mut self.used, block, false);
            if let Some(next) = next_candidate(&self.used, block) {
                mark(&mut self.used, next, true);
                self.blocks.push(next);
                self.fill();
                return true;
            }
        }
        self.done = true;
        false
    }

    /// Blocks of the current point. Only meaningful after [`advance`] returned
    /// `true`.
    ///
    /// [`advance`]: FixedPoints::advance
    pub fn current(&self) -> &[Block] {
        &self.blocks
    }
}

impl Iterator for FixedPoints {
    type Item = FixedPoint;

    fn next(&mut self) -> Option<FixedPoint> {
        if self.advance() {
            Some(FixedPoint {
                n: self.n,
                blocks: self.blocks.clone(),
            })
        } else {
            None
        }
    }
}

fn mark(used: &mut [bool], block: Block, value: bool) {
    match block {
        Block::Single(i) => used[i as usize] = value,
        Block::Pair(i, j) => {
            used[i as usize] = value;
            used[j as usize] = value;
        }
    }
}

fn next_unused(used: &[bool], after: u32) -> Option<u32> {
    (after as usize + 1..used.len())
        .find(|&k| !used[k])
        .map(|k| k as u32)
}

fn first_candidate(used: &[bool]) -> Option<Block> {
    next_unused(used, 0).map(Block::Single)
}

// Lexicographic successor among blocks drawn from the unused indices:
// {x} < {x,y} < {x,y'} < {x'} for y < y' and x < x'.
fn next_candidate(used: &[bool], block: Block) -> Option<Block> {
    let (x, partner_floor) = match block {
        Block::Single(x) => (x, x),
        Block::Pair(x, y) => (x, y),
    };
    if let Some(y) = next_unused(used, partner_floor) {
        return Some(Block::Pair(x, y));
    }
    next_unused(used, x).map(Block::Single)
}
