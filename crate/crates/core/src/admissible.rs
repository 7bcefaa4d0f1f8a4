//! Admissible index sets.
//!
//! Fix a length vector r with the two distinguished sides in the last two
//! slots. An index set I inside {1, ..., n-2} assigns eps_i = +1 to members
//! and eps_i = -1 to the rest; write S = sum(eps_i * r_i) over the first n-2
//! sides. I is *admissible* when the three strict triangle inequalities
//!
//! ```text
//!  S + r_{n-1} - r_n > 0
//!  S - r_{n-1} + r_n > 0
//! -S + r_{n-1} + r_n > 0
//! ```
//!
//! hold, i.e. |r_{n-1} - r_n| < S < r_{n-1} + r_n. Geometrically: the first
//! n-2 sides collapse onto a line with directions eps, and the two remaining
//! sides close a genuine triangle over the resulting displacement S. Each
//! admissible I labels one isolated fixed point of the bending circle action.
//!
//! Enumeration sweeps all 2^(n-2) subsets in Gray-code order, maintaining the
//! running signed sum with a single exact add or subtract per subset. The
//! sweep space can be partitioned by fixing the top bits, one contiguous
//! index block per worker, and merged deterministically.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lengths::{to_i128, LengthVector};
use crate::rational::Rational;

/// Largest supported subset universe: masks are u32 over positions 1..n-2.
pub const MAX_SWEEP_BITS: usize = 32;

/// A subset of {1, ..., n-2} as a bitmask: bit i-1 set iff i is a member
/// (eps_i = +1); clear iff eps_i = -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    mask: u32,
}

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet { mask: 0 };

    /// Checks that only bits 1..n-2 are used.
    pub fn from_mask(mask: u32, n: usize) -> Result<Self> {
        let width = n - 2;
        if width < MAX_SWEEP_BITS && mask >> width != 0 {
            return Err(Error::IndexOutOfRange(mask, width));
        }
        Ok(IndexSet { mask })
    }

    /// From 1-based indices.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > n - 2 {
                return Err(Error::InvalidInput(format!(
                    "index {i} outside 1..={}",
                    n - 2
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(IndexSet { mask })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn cardinality(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=MAX_SWEEP_BITS).contains(&i) && self.mask & (1 << (i - 1)) != 0
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        let width = n - 2;
        let full = if width >= 32 { u32::MAX } else { (1u32 << width) - 1 };
        IndexSet {
            mask: !self.mask & full,
        }
    }

    /// Sorted 1-based members.
    pub fn indices(&self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.mask & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let idx = self.indices();
        let mut seq = serializer.serialize_seq(Some(idx.len()))?;
        for i in idx {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Every admissible subset for one length vector, sorted by mask, with the
/// per-cardinality histogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleFamily {
    pub n: usize,
    pub sets: Vec<IndexSet>,
    pub histogram: BTreeMap<u32, u64>,
}

impl AdmissibleFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: IndexSet) -> bool {
        self.sets.binary_search(&set).is_ok()
    }
}

/// Exact evaluation of the three closing inequalities for a single subset.
pub fn is_admissible(r: &LengthVector, set: IndexSet) -> Result<bool> {
    let n = r.n();
    let set = IndexSet::from_mask(set.mask(), n)?;
    let mut signed = Rational::zero();
    for i in 1..=n - 2 {
        if set.contains(i) {
            signed = signed + r.get(i);
        } else {
            signed = signed - r.get(i);
        }
    }
    let a = r.get(n - 1);
    let b = r.get(n);
    let window_lo = (a - b).abs();
    let window_hi = a + b;
    Ok(window_lo < signed && signed < window_hi)
}

pub fn enumerate_admissible(r: &LengthVector) -> Result<AdmissibleFamily> {
    enumerate_admissible_threaded(r, 1)
}

/// Gray-code sweep over all subsets of {1..n-2}; with `threads > 1` the index
/// space is split into contiguous blocks (fixed top bits) swept in parallel.
/// The merged family is sorted by mask and identical for every thread count.
pub fn enumerate_admissible_threaded(r: &LengthVector, threads: usize) -> Result<AdmissibleFamily> {
    let n = r.n();
    let mut sets: Vec<IndexSet> = run_sweep(r, threads, Vec::new, |acc, mask, _card| {
        acc.push(IndexSet { mask });
    })?
    .into_iter()
    .flatten()
    .collect();
    sets.sort_unstable();

    let mut histogram = BTreeMap::new();
    for s in &sets {
        *histogram.entry(s.cardinality()).or_insert(0u64) += 1;
    }
    Ok(AdmissibleFamily { n, sets, histogram })
}

/// Fold (sign, cardinality) over the admissible family without materializing
/// it: signed count of subsets weighted by (-1)^(n - |I|), plus histogram.
pub(crate) fn fold_signed_count(
    r: &LengthVector,
    threads: usize,
) -> Result<(i64, BTreeMap<u32, u64>)> {
    let n = r.n();
    let partials = run_sweep(
        r,
        threads,
        || (0i64, BTreeMap::<u32, u64>::new()),
        |acc, _mask, card| {
            let sign = if (n as u32 - card).is_multiple_of(2) { 1 } else { -1 };
            acc.0 += sign;
            *acc.1.entry(card).or_insert(0) += 1;
        },
    )?;
    let mut coefficient = 0i64;
    let mut histogram = BTreeMap::new();
    for (c, h) in partials {
        coefficient += c;
        for (card, count) in h {
            *histogram.entry(card).or_insert(0) += count;
        }
    }
    Ok((coefficient, histogram))
}

/// Shared sweep driver. Calls `hit(acc, mask, cardinality)` for every
/// admissible subset; returns one accumulator per block, in block order.
fn run_sweep<A, Init, Hit>(
    r: &LengthVector,
    threads: usize,
    init: Init,
    hit: Hit,
) -> Result<Vec<A>>
where
    A: Send,
    Init: Fn() -> A + Sync,
    Hit: Fn(&mut A, u32, u32) + Sync,
{
    let n = r.n();
    let bits = n - 2;
    if bits > MAX_SWEEP_BITS {
        return Err(Error::InvalidInput(format!(
            "subset enumeration supports n <= {}, got n = {n}",
            MAX_SWEEP_BITS + 2
        )));
    }
    let scaled = r.scaled_integers();

    if let Some(w) = to_i128(&scaled) {
        let (weights, pair) = w.split_at(bits);
        let (a, b) = (pair[0], pair[1]);
        let lo = (a - b).abs();
        let hi = a + b;
        let blocks = split_blocks(bits, threads);
        if blocks.len() == 1 {
            let mut acc = init();
            sweep_i128(weights, lo, hi, blocks[0].clone(), |m, c| hit(&mut acc, m, c));
            return Ok(vec![acc]);
        }
        let accs = std::thread::scope(|scope| {
            let handles: Vec<_> = blocks
                .iter()
                .map(|range| {
                    let range = range.clone();
                    let init = &init;
                    let hit = &hit;
                    scope.spawn(move || {
                        let mut acc = init();
                        sweep_i128(weights, lo, hi, range, |m, c| hit(&mut acc, m, c));
                        acc
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        return Ok(accs);
    }

    // Oversized integers: single BigInt sweep. Rare, and kept sequential.
    let (weights, pair) = scaled.split_at(bits);
    let (a, b) = (&pair[0], &pair[1]);
    let lo = (a - b).abs();
    let hi = a + b;
    let mut acc = init();
    sweep_big(weights, &lo, &hi, 0..1u64 << bits, |m, c| hit(&mut acc, m, c));
    Ok(vec![acc])
}

/// Contiguous Gray-index blocks (equal power-of-two sizes) covering 0..2^bits.
fn split_blocks(bits: usize, threads: usize) -> Vec<Range<u64>> {
    let total: u64 = 1u64 << bits;
    let want = threads.max(1).next_power_of_two() as u64;
    let count = want.min(total);
    let size = total / count;
    (0..count).map(|k| (k * size)..((k + 1) * size)).collect()
}

/// Walk Gray codes for the index range, keeping the signed sum current with
/// one update per step; report subsets inside the open window (lo, hi).
fn sweep_i128(
    weights: &[i128],
    lo: i128,
    hi: i128,
    range: Range<u64>,
    mut hit: impl FnMut(u32, u32),
) {
    let start = range.start;
    let mut mask = (start ^ (start >> 1)) as u32;
    let mut sum: i128 = -weights.iter().sum::<i128>();
    for (bit, w) in weights.iter().enumerate() {
        if mask & (1 << bit) != 0 {
            sum += 2 * w;
        }
    }
    for idx in range.clone() {
        if lo < sum && sum < hi {
            hit(mask, mask.count_ones());
        }
        if idx + 1 < range.end {
            let bit = (idx + 1).trailing_zeros() as usize;
            mask ^= 1 << bit;
            if mask & (1 << bit) != 0 {
                sum += 2 * weights[bit];
            } else {
                sum -= 2 * weights[bit];
            }
        }
    }
}

fn sweep_big(
    weights: &[BigInt],
    lo: &BigInt,
    hi: &BigInt,
    range: Range<u64>,
    mut hit: impl FnMut(u32, u32),
) {
    let start = range.start;
    let mut mask = (start ^ (start >> 1)) as u32;
    let mut sum: BigInt = -weights.iter().sum::<BigInt>();
    for (bit, w) in weights.iter().enumerate() {
        if mask & (1 << bit) != 0 {
            sum += 2 * w;
        }
    }
    for idx in range.clone() {
        if *lo < sum && sum < *hi {
            hit(mask, mask.count_ones());
        }
        if idx + 1 < range.end {
            let bit = (idx + 1).trailing_zeros() as usize;
            mask ^= 1 << bit;
            if mask & (1 << bit) != 0 {
                sum += 2 * &weights[bit];
            } else {
                sum -= 2 * &weights[bit];
            }
        }
    }
}
