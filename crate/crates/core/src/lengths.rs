//! Length vectors, walls and chambers.
//!
//! A length vector r = (r_1, ..., r_n) of positive rationals determines the
//! moduli space of closed n-gons in R^3 with those side lengths. The space is
//! a smooth manifold exactly when no signed combination sum(eps_i * r_i) with
//! eps_i in {-1, +1} vanishes; each vanishing combination is a *wall*. The
//! connected components of the complement of the walls are chambers, and every
//! combinatorial invariant computed in this crate is constant on chambers.
//!
//! Wall detection clears denominators once (multiplying by the lcm) and then
//! works on exact integers, either by a meet-in-the-middle split over signed
//! half-sums or, as an oracle, by a full scan over all sign vectors.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ordered positive side lengths; the problem instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LengthVector {
    entries: Vec<Rational>,
}

impl LengthVector {
    /// Degenerate inputs (n < 3, nonpositive entries) are rejected here, once,
    /// so every downstream operation can assume a valid vector.
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a polygon needs at least 3 sides, got {}",
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|e| !e.is_positive()) {
            return Err(Error::InvalidInput(format!(
                "side {} has nonpositive length {}",
                i + 1,
                entries[i]
            )));
        }
        Ok(LengthVector { entries })
    }

    pub fn from_strs(strs: &[&str]) -> Result<Self> {
        let entries = strs
            .iter()
            .map(|s| Rational::from_str(s))
            .collect::<Result<Vec<_>>>()?;
        LengthVector::new(entries)
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        LengthVector::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// 1-based access, matching the index convention used everywhere.
    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i - 1]
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.entries.iter().map(Rational::to_f64).collect()
    }

    /// Rescale so the lengths sum to 2. Every invariant in this crate is
    /// scale-invariant, so callers may equally work unnormalized.
    pub fn normalize(&self) -> LengthVector {
        let scale = Rational::from_integer(2) / self.total();
        LengthVector {
            entries: self.entries.iter().map(|e| e * &scale).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Result<LengthVector> {
        if !factor.is_positive() {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        Ok(LengthVector {
            entries: self.entries.iter().map(|e| e * factor).collect(),
        })
    }

    pub fn is_equilateral(&self) -> bool {
        self.entries.iter().all(|e| e == &self.entries[0])
    }

    /// 1-based index of a side strictly longer than the sum of the others.
    pub fn violating_side(&self) -> Option<usize> {
        let total = self.total();
        self.entries
            .iter()
            .position(|e| {
                let rest = &total - e;
                e > &rest
            })
            .map(|i| i + 1)
    }

    /// A closed polygon exists iff the longest side is at most the sum of the
    /// rest.
    pub fn is_nonempty(&self) -> bool {
        self.violating_side().is_none()
    }

    /// Lexicographically first pair (i, j), i < j, with r_i != r_j.
    pub fn first_unequal_pair(&self) -> Option<(usize, usize)> {
        let j = self.entries.iter().position(|e| e != &self.entries[0])?;
        Some((1, j + 1))
    }

    /// Reorder so the two pivot sides (1-based) land in the last two slots,
    /// preserving the relative order of the rest.
    pub fn with_pair_last(&self, i: usize, j: usize) -> Result<LengthVector> {
        let n = self.n();
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::InvalidInput(format!(
                "pivot ({i}, {j}) out of range for n = {n}"
            )));
        }
        let mut rest = Vec::with_capacity(n);
        for (k, e) in self.entries.iter().enumerate() {
            if k + 1 != i && k + 1 != j {
                rest.push(e.clone());
            }
        }
        rest.push(self.get(i).clone());
        rest.push(self.get(j).clone());
        Ok(LengthVector { entries: rest })
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<LengthVector> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidInput("permutation length mismatch".into()));
        }
        let mut entries = Vec::with_capacity(n);
        for &p in perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[p - 1] = true;
            entries.push(self.get(p).clone());
        }
        Ok(LengthVector { entries })
    }

    /// Clear denominators: returns lcm-scaled positive integers, one per side.
    /// Signs and equalities of signed combinations are unchanged by scaling.
    pub fn scaled_integers(&self) -> Vec<BigInt> {
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::from(1), |acc, e| acc.lcm(e.denominator()));
        self.entries
            .iter()
            .map(|e| e.numerator() * (&lcm / e.denominator()))
            .collect()
    }

    /// True iff no sign vector eps in {-1,+1}^n has sum(eps_i * r_i) = 0.
    pub fn is_smooth(&self) -> bool {
        self.degenerate_partition().is_none()
    }

    /// A witness that the vector lies on a wall: one side of a partition whose
    /// two signed sums balance, canonicalized to contain index 1 and returned
    /// as sorted 1-based indices. `None` iff the vector is smooth.
    ///
    /// Meet in the middle: hash the 2^ceil(n/2) signed sums of the first half,
    /// probe with the signed sums of the second half. O(2^(n/2)) instead of
    /// the O(2^n) full scan.
    pub fn degenerate_partition(&self) -> Option<Vec<usize>> {
        let weights = self.scaled_integers();
        let mask = match to_i128(&weights) {
            Some(w) => mitm_zero_sum_i128(&w)?,
            None => mitm_zero_sum_big(&weights)?,
        };
        Some(canonical_side(mask, self.n()))
    }

    /// Signs of all inner-wall expressions, one per canonical partition.
    pub fn chamber_signature(&self) -> ChamberSignature {
        let weights = self.scaled_integers();
        let signs = match to_i128(&weights) {
            Some(w) => partition_signs_i128(&w),
            None => partition_signs_big(&weights),
        };
        let n = self.n();
        let mut entries = Vec::new();
        for (tmask, &sign) in signs.iter().enumerate() {
            let card = 1 + (tmask as u64).count_ones() as usize;
            if card >= 2 && card <= n - 2 {
                entries.push((1u64 | ((tmask as u64) << 1), sign));
            }
        }
        ChamberSignature { n, entries }
    }
}

impl std::fmt::Display for LengthVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Signs of sum_{i in S} r_i - sum_{i not in S} r_i over the canonical
/// partitions: S contains index 1 and 2 <= |S| <= n-2, listed in increasing
/// order of the bitmask of S (bit i-1 set iff i in S). Two smooth vectors
/// with the same signature lie in the same chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberSignature {
    n: usize,
    entries: Vec<(u64, i8)>,
}

impl ChamberSignature {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True iff some canonical partition sign vanishes, i.e. the vector lies
    /// on an inner wall (at least two indices on each side).
    pub fn on_inner_wall(&self) -> bool {
        self.entries.iter().any(|&(_, s)| s == 0)
    }

    /// (sorted 1-based subset, sign) pairs in canonical order.
    pub fn partitions(&self) -> impl Iterator<Item = (Vec<usize>, i8)> + '_ {
        self.entries
            .iter()
            .map(|&(mask, sign)| (mask_to_indices(mask), sign))
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        self.entries.iter().map(|&(_, s)| s)
    }
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask & (1u64 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

/// Canonicalize a +1-side bitmask (bit i-1 <-> index i) to the side that
/// contains index 1, sorted ascending.
fn canonical_side(mask: u64, n: usize) -> Vec<usize> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let side = if mask & 1 != 0 { mask } else { !mask & full };
    mask_to_indices(side)
}

pub(crate) fn to_i128(weights: &[BigInt]) -> Option<Vec<i128>> {
    let w: Option<Vec<i128>> = weights.iter().map(|b| b.to_i128()).collect();
    let w = w?;
    // Running signed sums stay within sum(|w|); keep 2x headroom for the
    // +-2w Gray-code updates.
    let total: i128 = w.iter().try_fold(0i128, |acc, &x| {
        acc.checked_add(x.checked_abs()?)
    })?;
    if total > i128::MAX / 4 {
        return None;
    }
    Some(w)
}

// Each macro-free duplicate below exists because BigInt arithmetic goes
// through references while i128 is Copy; the control flow is identical.

/// Signed-sum meet in the middle over exact integers. Returns the +1-side
/// bitmask of a vanishing sign vector, or None.
fn mitm_zero_sum_i128(weights: &[i128]) -> Option<u64> {
    let n = weights.len();
    let half = n.div_ceil(2);
    let (a, b) = weights.split_at(half);

    // All signed sums of the first half, keyed by sum; first mask wins so the
    // witness is deterministic.
    let mut table: HashMap<i128, u64> = HashMap::with_capacity(1 << a.len());
    let mut sum: i128 = -a.iter().sum::<i128>();
    let mut mask: u64 = 0;
    table.entry(sum).or_insert(mask);
    for idx in 1u64..(1u64 << a.len()) {
        let bit = idx.trailing_zeros() as usize;
        mask ^= 1u64 << bit;
        if mask & (1u64 << bit) != 0 {
            sum += 2 * weights[bit];
        } else {
            sum -= 2 * weights[bit];
        }
        table.entry(sum).or_insert(mask);
    }

    let mut sum_b: i128 = -b.iter().sum::<i128>();
    let mut mask_b: u64 = 0;
    if let Some(&ma) = table.get(&-sum_b) {
        return Some(ma | (mask_b << half));
    }
    for idx in 1u64..(1u64 << b.len()) {
        let bit = idx.trailing_zeros() as usize;
        mask_b ^= 1u64 << bit;
        if mask_b & (1u64 << bit) != 0 {
            sum_b += 2 * weights[half + bit];
        } else {
            sum_b -= 2 * weights[half + bit];
        }
        if let Some(&ma) = table.get(&-sum_b) {
            return Some(ma | (mask_b << half));
        }
    }
    None
}

fn mitm_zero_sum_big(weights: &[BigInt]) -> Option<u64> {
    let n = weights.len();
    let half = n.div_ceil(2);
    let (a, b) = weights.split_at(half);

    let mut table: HashMap<BigInt, u64> = HashMap::with_capacity(1 << a.len());
    let mut sum: BigInt = -a.iter().sum::<BigInt>();
    let mut mask: u64 = 0;
    table.entry(sum.clone()).or_insert(mask);
    for idx in 1u64..(1u64 << a.len()) {
        let bit = idx.trailing_zeros() as usize;
        mask ^= 1u64 << bit;
        if mask & (1u64 << bit) != 0 {
            sum += 2 * &weights[bit];
        } else {
            sum -= 2 * &weights[bit];
        }
        table.entry(sum.clone()).or_insert(mask);
    }

    let mut sum_b: BigInt = -b.iter().sum::<BigInt>();
    let mut mask_b: u64 = 0;
    if let Some(&ma) = table.get(&-&sum_b) {
        return Some(ma | (mask_b << half));
    }
    for idx in 1u64..(1u64 << b.len()) {
        let bit = idx.trailing_zeros() as usize;
        mask_b ^= 1u64 << bit;
        if mask_b & (1u64 << bit) != 0 {
            sum_b += 2 * &weights[half + bit];
        } else {
            sum_b -= 2 * &weights[half + bit];
        }
        if let Some(&ma) = table.get(&-&sum_b) {
            return Some(ma | (mask_b << half));
        }
    }
    None
}

/// Signs of the partition expressions indexed by tmask over indices 2..n:
/// S = {1} union T, value = sum_S - sum_{S^c}. Gray-code walk, one add or
/// subtract per step.
fn partition_signs_i128(weights: &[i128]) -> Vec<i8> {
    let n = weights.len();
    let m = n - 1;
    let mut signs = vec![0i8; 1usize << m];
    let mut sum: i128 = weights[0] - weights[1..].iter().sum::<i128>();
    let mut mask: usize = 0;
    signs[0] = sign_of(sum);
    for idx in 1u64..(1u64 << m) {
        let bit = idx.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            sum += 2 * weights[bit + 1];
        } else {
            sum -= 2 * weights[bit + 1];
        }
        signs[mask] = sign_of(sum);
    }
    signs
}

fn partition_signs_big(weights: &[BigInt]) -> Vec<i8> {
    let n = weights.len();
    let m = n - 1;
    let mut signs = vec![0i8; 1usize << m];
    let mut sum: BigInt = &weights[0] - weights[1..].iter().sum::<BigInt>();
    let mut mask: usize = 0;
    signs[0] = sign_of_big(&sum);
    for idx in 1u64..(1u64 << m) {
        let bit = idx.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            sum += 2 * &weights[bit + 1];
        } else {
            sum -= 2 * &weights[bit + 1];
        }
        signs[mask] = sign_of_big(&sum);
    }
    signs
}

fn sign_of(v: i128) -> i8 {
    match v {
        0 => 0,
        v if v > 0 => 1,
        _ => -1,
    }
}

fn sign_of_big(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}
