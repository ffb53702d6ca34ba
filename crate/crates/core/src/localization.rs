//! Localization of `π₀*(H₁)^a · π∞*(H₂)^b` to the torus-fixed points, the
//! `t → 1` limit along a generic one-parameter subgroup, and the summation
//! that yields the ML-degree.
//!
//! Along the subgroup `tᵢ ↦ t^{wᵢ}` every factor `1 − t^e` of a localized term
//! contributes its exponent `e` to the limit, so a fixed point with first
//! block `{i, i'}` and last block `{j, j'}` contributes
//!
//! ```text
//! (−(wᵢ + w_{i'}))^a · (wⱼ + w_{j'})^b / ∏_{χ ∈ compass} ⟨−χ, w⟩
//! ```
//!
//! The denominator runs over the cotangent characters (negated tangent
//! characters); with that orientation every sum is the positive ML-degree.

use std::fmt;
use std::time::Instant;

use log::info;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chains::{self, Block, FixedPoint, FixedPoints};
use crate::compass::{self, dimension, Term};
use crate::error::{Error, Result};

/// Rejection-sampling attempts before [`random_subgroup`] gives up.
pub const RANDOM_SUBGROUP_MAX_TRIES: usize = 10_000;

/// A one-parameter subgroup `εᵢ ↦ wᵢ` of the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    weights: Vec<BigInt>,
}

impl Subgroup {
    /// Wraps `weights` without checking genericity; see [`Subgroup::is_generic`].
    pub fn new(weights: Vec<BigInt>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument(
                "a subgroup needs at least one weight".into(),
            ));
        }
        Ok(Subgroup { weights })
    }

    pub fn from_i64(weights: &[i64]) -> Result<Self> {
        Subgroup::new(weights.iter().map(|&w| BigInt::from(w)).collect())
    }

    pub fn n(&self) -> u32 {
        self.weights.len() as u32
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    /// True iff all pair sums `wᵢ + w_{i'}` (`i ≤ i'`) are pairwise distinct.
    pub fn is_generic(&self) -> bool {
        let n = self.weights.len();
        let mut sums = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                sums.push(&self.weights[i] + &self.weights[j]);
            }
        }
        sums.sort_unstable();
        sums.windows(2).all(|w| w[0] != w[1])
    }

    /// Weight of a block: `2wᵢ` for `{i}`, `wᵢ + wⱼ` for `{i, j}`.
    pub fn block_weight(&self, block: Block) -> BigInt {
        let (i, j) = block.as_pair();
        &self.weights[i as usize - 1] + &self.weights[j as usize - 1]
    }

    fn as_i64(&self) -> Option<Vec<i64>> {
        const LIMIT: i64 = 1 << 61;
        self.weights
            .iter()
            .map(|w| w.to_i64().filter(|v| v.abs() < LIMIT))
            .collect()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, w) in self.weights.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

/// Free-function form of [`Subgroup::is_generic`].
pub fn validate_subgroup(s: &Subgroup) -> bool {
    s.is_generic()
}

/// `wᵢ = 2^i`, generic because distinct pair sums of powers of two differ.
pub fn default_subgroup(n: u32) -> Result<Subgroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Subgroup::new((1..=n).map(|i| BigInt::one() << i as usize).collect())
}

/// A generic subgroup with weights drawn uniformly from `[1, bound]`.
///
/// Deterministic in `seed`. A bound of at least `n³` keeps rejections rare.
pub fn random_subgroup(n: u32, seed: u64, bound: u64) -> Result<Subgroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_SUBGROUP_MAX_TRIES {
        let weights = (0..n)
            .map(|_| BigInt::from(rng.random_range(1..=bound)))
            .collect();
        let s = Subgroup { weights };
        if s.is_generic() {
            return Ok(s);
        }
    }
    Err(Error::ResourceExhausted(format!(
        "no generic subgroup for n = {n} with bound {bound} after {RANDOM_SUBGROUP_MAX_TRIES} tries"
    )))
}

/// Localization of `π₀*(H₁)^a · π∞*(H₂)^b` at a fixed point: the Laurent
/// monomial `(1 − tᵢ⁻¹t_{i'}⁻¹)^a (1 − tⱼt_{j'})^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestrictedClass {
    pub first_block: Block,
    pub last_block: Block,
    pub a: u32,
    pub b: u32,
}

impl RestrictedClass {
    /// Exponents of `t` after specialization: `−w(first)` repeated `a` times,
    /// then `w(last)` repeated `b` times.
    pub fn numerator_exponents(&self, s: &Subgroup) -> Vec<BigInt> {
        let first = -s.block_weight(self.first_block);
        let last = s.block_weight(self.last_block);
        std::iter::repeat_n(first, self.a as usize)
            .chain(std::iter::repeat_n(last, self.b as usize))
            .collect()
    }
}

impl fmt::Display for RestrictedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn power(f: &mut fmt::Formatter<'_>, e: u32) -> fmt::Result {
            if e > 1 {
                write!(f, "^{e}")?;
            }
            Ok(())
        }
        if self.a == 0 && self.b == 0 {
            return f.write_str("1");
        }
        if self.a > 0 {
            match self.first_block {
                Block::Single(i) => write!(f, "(1-t{i}^-2)")?,
                Block::Pair(i, j) => write!(f, "(1-t{i}^-1t{j}^-1)")?,
            }
            power(f, self.a)?;
        }
        if self.b > 0 {
            match self.last_block {
                Block::Single(j) => write!(f, "(1-t{j}^2)")?,
                Block::Pair(i, j) => write!(f, "(1-t{i}t{j})")?,
            }
            power(f, self.b)?;
        }
        Ok(())
    }
}

fn check_exponents(n: u32, a: u32, b: u32) -> Result<()> {
    let dim = dimension(n);
    if a as u64 + b as u64 != dim {
        return Err(Error::InvalidArgument(format!(
            "exponents a = {a}, b = {b} must sum to C(n+1,2) - 1 = {dim}"
        )));
    }
    Ok(())
}

pub fn restrict_class(p: &FixedPoint, a: u32, b: u32) -> Result<RestrictedClass> {
    check_exponents(p.n(), a, b)?;
    Ok(RestrictedClass {
        first_block: p.first_block(),
        last_block: p.last_block(),
        a,
        b,
    })
}

/// `lim_{t→1} ∏(1 − t^{bᵢ}) / ∏(1 − t^{cᵢ}) = ∏bᵢ / ∏cᵢ`.
pub fn limit_ratio(numerator: &[BigInt], denominator: &[BigInt]) -> Result<BigRational> {
    if numerator.len() != denominator.len() {
        return Err(Error::InvalidArgument(format!(
            "numerator has {} factors, denominator {}",
            numerator.len(),
            denominator.len()
        )));
    }
    if numerator.iter().chain(denominator).any(Zero::is_zero) {
        return Err(Error::InvalidArgument("zero exponent in limit".into()));
    }
    let num: BigInt = numerator.iter().product();
    let den: BigInt = denominator.iter().product();
    Ok(BigRational::new(num, den))
}

/// The `t → 1` limit of one fixed point's localized term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution(BigRational);

impl Contribution {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

/// Contribution of `p` to `π₀*(H₁)^a · π∞*(H₂)^b`, computed from the explicit
/// compass and [`limit_ratio`].
pub fn contribution(p: &FixedPoint, a: u32, b: u32, s: &Subgroup) -> Result<Contribution> {
    if s.n() != p.n() {
        return Err(Error::InvalidArgument(format!(
            "subgroup has {} weights but the point lives in n = {}",
            s.n(),
            p.n()
        )));
    }
    let class = restrict_class(p, a, b)?;
    let mut denominator = Vec::with_capacity(dimension(p.n()) as usize);
    for ch in compass::compass(p)? {
        let pairing = -ch.pair_with(s.weights());
        if pairing.is_zero() {
            return Err(Error::NonGenericSubgroup {
                character: ch.to_string(),
            });
        }
        denominator.push(pairing);
    }
    limit_ratio(&class.numerator_exponents(s), &denominator).map(Contribution)
}

/// Worker-count control for the summation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Parallelism {
    /// `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Parallelism {
    pub fn threads(n: usize) -> Self {
        Parallelism { threads: Some(n) }
    }

    fn install<R: Send>(&self, job: impl FnOnce() -> R + Send) -> Result<R> {
        match self.threads {
            None => Ok(job()),
            Some(0) => Err(Error::InvalidArgument("threads must be at least 1".into())),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::ResourceExhausted(e.to_string()))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// Running exact sum `num / den`. The denominator is kept as the least common
/// multiple of everything added; the fraction is reduced once at the end.
#[derive(Clone, Debug)]
pub struct RationalAccumulator {
    num: BigInt,
    den: BigUint,
}

impl Default for RationalAccumulator {
    fn default() -> Self {
        RationalAccumulator {
            num: BigInt::zero(),
            den: BigUint::one(),
        }
    }
}

impl RationalAccumulator {
    pub fn add(&mut self, num: BigInt, den: &BigUint) {
        if num.is_zero() {
            return;
        }
        if den.is_one() {
            self.num += num * BigInt::from(self.den.clone());
            return;
        }
        let g = self.den.gcd(den);
        let scale_self = den / &g;
        let scale_other = &self.den / &g;
        self.num = &self.num * BigInt::from(scale_self.clone())
            + num * BigInt::from(scale_other);
        self.den *= scale_self;
    }

    pub fn merge(mut self, other: RationalAccumulator) -> RationalAccumulator {
        self.add(other.num, &other.den);
        self
    }

    pub fn finish(self) -> BigRational {
        BigRational::new(self.num, BigInt::from(self.den))
    }
}

/// Result of a full localization sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationSum {
    pub n: u32,
    /// The statistician's `a` values, in the order requested.
    pub a_values: Vec<u32>,
    /// Exact sums, one per entry of `a_values`.
    pub sums: Vec<BigRational>,
    pub fixed_points: u64,
}

impl LocalizationSum {
    /// Converts every sum to a positive integer, failing if any is not.
    pub fn into_degrees(self) -> Result<Vec<BigUint>> {
        self.a_values
            .iter()
            .zip(self.sums)
            .map(|(&a, sum)| {
                if !sum.is_integer() || !sum.is_positive() {
                    return Err(Error::Internal(format!(
                        "localization sum for n = {}, a = {a} is {sum}, not a positive integer",
                        self.n
                    )));
                }
                Ok(sum.to_integer().to_biguint().expect("positive"))
            })
            .collect()
    }
}

fn check_a(n: u32, a: u32) -> Result<()> {
    let top = dimension(n) + 1;
    if a == 0 || a as u64 > top {
        return Err(Error::InvalidArgument(format!(
            "a = {a} out of range 1..={top} for n = {n}"
        )));
    }
    Ok(())
}

/// Sums the localized contributions over all fixed points for each requested
/// `a`, in one pass over the fixed points.
pub fn localization_sums(
    n: u32,
    a_values: &[u32],
    subgroup: Option<&Subgroup>,
    parallelism: Parallelism,
) -> Result<LocalizationSum> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    for &a in a_values {
        check_a(n, a)?;
    }
    let owned;
    let s = match subgroup {
        Some(s) => s,
        None => {
            owned = default_subgroup(n)?;
            &owned
        }
    };
    if s.n() != n {
        return Err(Error::InvalidArgument(format!(
            "subgroup has {} weights, expected {n}",
            s.n()
        )));
    }

    let started = Instant::now();
    let engine = Engine::new(n, a_values, s)?;
    let depth = if n >= 5 { 2 } else { 1 };
    let units = chains::prefixes(n, depth)?;
    let (accs, count) = parallelism.install(|| {
        units
            .into_par_iter()
            .map(|prefix| engine.run_unit(prefix))
            .try_reduce(
                || (engine.empty(), 0u64),
                |(a, ca), (b, cb)| {
                    let merged = a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect();
                    Ok((merged, ca + cb))
                },
            )
    })??;

    let elapsed = started.elapsed().as_secs_f64();
    info!(
        "n = {n}: {count} fixed points in {elapsed:.3}s ({:.0} points/s)",
        count as f64 / elapsed.max(1e-9)
    );
    Ok(LocalizationSum {
        n,
        a_values: a_values.to_vec(),
        sums: accs.into_iter().map(RationalAccumulator::finish).collect(),
        fixed_points: count,
    })
}

/// `φ(n, a)`: the ML-degree of a generic `a`-dimensional linear concentration
/// model on `n × n` symmetric matrices. Uses `wᵢ = 2^i` when `subgroup` is
/// `None`.
pub fn ml_degree(n: u32, a: u32, subgroup: Option<&Subgroup>) -> Result<BigUint> {
    ml_degree_with(n, a, subgroup, Parallelism::default())
}

pub fn ml_degree_with(
    n: u32,
    a: u32,
    subgroup: Option<&Subgroup>,
    parallelism: Parallelism,
) -> Result<BigUint> {
    let sums = localization_sums(n, &[a], subgroup, parallelism)?;
    Ok(sums.into_degrees()?.pop().expect("one value"))
}

/// `φ(n, 1), …, φ(n, C(n+1,2))` from a single pass.
pub fn ml_degree_row(
    n: u32,
    subgroup: Option<&Subgroup>,
    parallelism: Parallelism,
) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let a_values: Vec<u32> = (1..=dimension(n) as u32 + 1).collect();
    localization_sums(n, &a_values, subgroup, parallelism)?.into_degrees()
}

/// Per-point evaluator shared by all workers.
struct Engine {
    n: u32,
    weights: Weights,
    /// Numerator exponent pairs `(a − 1, C(n+1,2) − a)` for each requested `a`.
    exponents: Vec<(u32, u32)>,
    /// `|w(B)|^e` for the exponents in use, indexed by block then exponent slot.
    first_powers: Vec<Vec<BigUint>>,
    last_powers: Vec<Vec<BigUint>>,
}

enum Weights {
    Small(Vec<i64>),
    Big(Subgroup),
}

impl Engine {
    fn new(n: u32, a_values: &[u32], s: &Subgroup) -> Result<Self> {
        let dim = dimension(n);
        let exponents: Vec<(u32, u32)> = a_values
            .iter()
            .map(|&a| (a - 1, (dim + 1 - a as u64) as u32))
            .collect();
        let weights = match s.as_i64() {
            Some(w) => Weights::Small(w),
            None => Weights::Big(s.clone()),
        };

        let nn = n as usize;
        let mut first_powers = vec![Vec::new(); nn * nn];
        let mut last_powers = vec![Vec::new(); nn * nn];
        for i in 1..=n {
            for j in i..=n {
                let block = if i == j {
                    Block::Single(i)
                } else {
                    Block::Pair(i, j)
                };
                let w = s.block_weight(block);
                let mag = w.magnitude().clone();
                let k = block_slot(n, block);
                first_powers[k] = exponents.iter().map(|&(e, _)| mag.pow(e)).collect();
                last_powers[k] = exponents.iter().map(|&(_, e)| mag.pow(e)).collect();
            }
        }
        Ok(Engine {
            n,
            weights,
            exponents,
            first_powers,
            last_powers,
        })
    }

    fn empty(&self) -> Vec<RationalAccumulator> {
        vec![RationalAccumulator::default(); self.exponents.len()]
    }

    fn run_unit(&self, prefix: Vec<Block>) -> Result<(Vec<RationalAccumulator>, u64)> {
        let mut accs = self.empty();
        let mut points = FixedPoints::with_prefix(self.n, prefix)?;
        let mut count = 0u64;
        while points.advance() {
            self.accumulate(points.current(), &mut accs)?;
            count += 1;
        }
        Ok((accs, count))
    }

    /// Adds the contribution of the chain `blocks` to every accumulator.
    fn accumulate(&self, blocks: &[Block], accs: &mut [RationalAccumulator]) -> Result<()> {
        let (den_negative, den) = self.denominator(blocks)?;
        let first = blocks[0];
        let last = blocks[blocks.len() - 1];
        let first_negative = self.block_weight_negative(first);
        let last_negative = self.block_weight_negative(last);
        let fp = &self.first_powers[block_slot(self.n, first)];
        let lp = &self.last_powers[block_slot(self.n, last)];

        for (slot, &(ea, eb)) in self.exponents.iter().enumerate() {
            // Numerator factor is −w(first) repeated ea times.
            let negative = den_negative
                ^ (ea % 2 == 1 && !first_negative)
                ^ (eb % 2 == 1 && last_negative);
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            let num = BigInt::from_biguint(sign, &fp[slot] * &lp[slot]);
            accs[slot].add(num, &den);
        }
        Ok(())
    }

    fn block_weight_negative(&self, block: Block) -> bool {
        let (i, j) = block.as_pair();
        match &self.weights {
            Weights::Small(w) => w[i as usize - 1] + w[j as usize - 1] < 0,
            Weights::Big(s) => s.block_weight(block).is_negative(),
        }
    }

    /// Sign and magnitude of `∏ ⟨−χ, w⟩` over the compass.
    fn denominator(&self, blocks: &[Block]) -> Result<(bool, BigUint)> {
        let mut zero: Option<Term> = None;
        let mut negatives = 0u64;
        let mut product = ChunkedProduct::default();
        match &self.weights {
            Weights::Small(w) => {
                let wt = |k: u32| w[k as usize - 1] as i128;
                let bw = |b: Block| {
                    let (i, j) = b.as_pair();
                    wt(i) + wt(j)
                };
                compass::for_each_term(blocks, |_, term| {
                    let v = match term {
                        Term::IndexDiff(i, j) => wt(i) - wt(j),
                        Term::BlockDiff(a, b) => bw(a) - bw(b),
                    };
                    if v == 0 {
                        zero.get_or_insert(term);
                    }
                    // Cotangent pairing is −v.
                    if v > 0 {
                        negatives += 1;
                    }
                    product.mul(v.unsigned_abs());
                });
            }
            Weights::Big(s) => {
                let wt = |k: u32| &s.weights()[k as usize - 1];
                compass::for_each_term(blocks, |_, term| {
                    let v = match term {
                        Term::IndexDiff(i, j) => wt(i) - wt(j),
                        Term::BlockDiff(a, b) => s.block_weight(a) - s.block_weight(b),
                    };
                    if v.is_zero() {
                        zero.get_or_insert(term);
                    }
                    if v.is_positive() {
                        negatives += 1;
                    }
                    product.mul_big(v.magnitude());
                });
            }
        }
        if let Some(term) = zero {
            return Err(Error::NonGenericSubgroup {
                character: term.to_character(self.n).to_string(),
            });
        }
        Ok((negatives % 2 == 1, product.finish()))
    }
}

fn block_slot(n: u32, block: Block) -> usize {
    let (i, j) = block.as_pair();
    (i as usize - 1) * n as usize + (j as usize - 1)
}

/// Product of many small factors, batched in a `u128` before touching the
/// big integer.
struct ChunkedProduct {
    big: BigUint,
    chunk: u128,
}

impl Default for ChunkedProduct {
    fn default() -> Self {
        ChunkedProduct {
            big: BigUint::one(),
            chunk: 1,
        }
    }
}

impl ChunkedProduct {
    fn mul(&mut self, v: u128) {
        match self.chunk.checked_mul(v) {
            Some(c) => self.chunk = c,
            None => {
                self.big *= self.chunk;
                self.chunk = v;
            }
        }
    }

    fn mul_big(&mut self, v: &BigUint) {
        self.big *= v;
    }

    fn finish(mut self) -> BigUint {
        self.big *= self.chunk;
        self.big
    }
}
