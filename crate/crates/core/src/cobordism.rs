//! The oriented circle-equivariant cobordism class of a polygon space.
//!
//! For a smooth nonempty length vector with a pair of unequal sides moved to
//! the last two slots, the moduli space carries the bending circle action
//! around the last proper diagonal. Its cobordism class is a signed number of
//! copies of complex projective space of dimension n-3: each admissible index
//! set I contributes one copy with orientation (-1)^(n - |I|). The class is
//! therefore determined by the signed count
//!
//! ```text
//! coefficient = sum over admissible I of (-1)^(n - |I|)
//! ```
//!
//! which for odd n does not depend on the choice of pair or on the ordering
//! of the sides. For even n the space always bounds (odd-dimensional
//! projective spaces are circle-bundle boundaries), so the class is null no
//! matter the count; the raw count is still reported.
//!
//! Equilateral vectors admit no bending pair. For odd n the class has the
//! closed form (-1)^(m+1) * C(2m-1, m) with n = 2m+1, recovered here both
//! directly and as the limit of perturbed vectors (1, ..., 1, 1+eps).

use std::collections::BTreeMap;

use crate::admissible::fold_signed_count;
use crate::error::{Error, Result};
use crate::lengths::LengthVector;
use crate::rational::Rational;

/// Two distinguished sides (1-based, unequal lengths) to bend around; they
/// are moved to the last two slots before enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pivot {
    pub i: usize,
    pub j: usize,
}

impl Pivot {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i >= j {
            return Err(Error::InvalidInput(format!(
                "pivot must satisfy 1 <= i < j, got ({i}, {j})"
            )));
        }
        Ok(Pivot { i, j })
    }

    fn validate(&self, r: &LengthVector) -> Result<()> {
        let n = r.n();
        if self.j > n {
            return Err(Error::InvalidInput(format!(
                "pivot ({}, {}) out of range for n = {n}",
                self.i, self.j
            )));
        }
        if r.get(self.i) == r.get(self.j) {
            return Err(Error::InvalidInput(format!(
                "pivot sides {} and {} have equal length {}",
                self.i,
                self.j,
                r.get(self.i)
            )));
        }
        Ok(())
    }
}

/// The default pivot is the distinguished pair (n-1, n) when those sides
/// differ; otherwise the lexicographically first unequal pair. For odd n the
/// coefficient does not depend on the choice, but the per-cardinality
/// histogram does, and the last-pair convention is the one the golden
/// pentagon examples are stated in.
pub fn default_pivot(r: &LengthVector) -> Result<Pivot> {
    let n = r.n();
    if r.get(n - 1) != r.get(n) {
        return Ok(Pivot { i: n - 1, j: n });
    }
    let (i, j) = r.first_unequal_pair().ok_or(Error::Equilateral)?;
    Ok(Pivot { i, j })
}

/// Signed count of projective-space summands plus bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismClass {
    pub n: usize,
    /// Complex dimension n-3 of each summand.
    pub complex_dimension: usize,
    /// sum over admissible I of (-1)^(n - |I|).
    pub coefficient: i64,
    /// Admissible sets per cardinality.
    pub summand_histogram: BTreeMap<u32, u64>,
    /// The class vanishes: zero count, or n even (the summands then bound).
    pub is_null: bool,
}

impl CobordismClass {
    pub fn family_size(&self) -> u64 {
        self.summand_histogram.values().sum()
    }
}

pub fn cobordism_class(r: &LengthVector, pivot: Option<Pivot>) -> Result<CobordismClass> {
    cobordism_class_threaded(r, pivot, 1)
}

/// Checks smoothness and nonemptiness, moves the pivot pair last, then folds
/// the orientation signs over the admissible family in one sweep.
pub fn cobordism_class_threaded(
    r: &LengthVector,
    pivot: Option<Pivot>,
    threads: usize,
) -> Result<CobordismClass> {
    if let Some(partition) = r.degenerate_partition() {
        return Err(Error::NotSmooth(partition));
    }
    if let Some(side) = r.violating_side() {
        return Err(Error::EmptyModuliSpace(side));
    }
    let pivot = match pivot {
        Some(p) => {
            p.validate(r)?;
            p
        }
        None => default_pivot(r)?,
    };
    let permuted = r.with_pair_last(pivot.i, pivot.j)?;
    let (coefficient, summand_histogram) = fold_signed_count(&permuted, threads)?;
    let n = r.n();
    Ok(CobordismClass {
        n,
        complex_dimension: n - 3,
        coefficient,
        summand_histogram,
        is_null: coefficient == 0 || n.is_multiple_of(2),
    })
}

/// Closed form for the equilateral class, odd n = 2m+1:
/// coefficient (-1)^(m+1) * C(2m-1, m), all summands in cardinality m.
pub fn equilateral_class(n: usize) -> Result<CobordismClass> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "equilateral class needs odd n >= 3, got {n} (even equilateral vectors lie on a wall)"
        )));
    }
    let m = (n - 1) / 2;
    let count = binomial(2 * m - 1, m).ok_or_else(|| {
        Error::InvalidInput(format!("equilateral count overflows i64 at n = {n}"))
    })?;
    let coefficient = if m.is_multiple_of(2) { -count } else { count };
    let mut summand_histogram = BTreeMap::new();
    summand_histogram.insert(m as u32, count as u64);
    Ok(CobordismClass {
        n,
        complex_dimension: n - 3,
        coefficient,
        summand_histogram,
        is_null: false,
    })
}

/// The class of (1, ..., 1, 1+eps); equals `equilateral_class(n)` for every
/// sufficiently small positive eps (the perturbation stays in one chamber).
pub fn perturbed_equilateral_check(n: usize, eps: &Rational) -> Result<CobordismClass> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "perturbed equilateral check needs odd n >= 3, got {n}"
        )));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let mut entries = vec![Rational::one(); n - 1];
    entries.push(Rational::one() + eps.clone());
    let r = LengthVector::new(entries)?;
    cobordism_class(&r, None)
}

/// The fixed submanifolds of the bending action (last two sides collinear):
/// polygon spaces one side shorter, with closing side r_{n-1}+r_n or
/// |r_{n-1}-r_n|, kept when nonempty. They bound, contributing nothing to the
/// class; reported for inspection.
pub fn type2_submanifolds(r: &LengthVector, pivot: Pivot) -> Result<Vec<LengthVector>> {
    pivot.validate(r)?;
    let permuted = r.with_pair_last(pivot.i, pivot.j)?;
    let n = permuted.n();
    if n < 4 {
        return Ok(Vec::new());
    }
    let a = permuted.get(n - 1);
    let b = permuted.get(n);
    let mut out = Vec::new();
    for closing in [a + b, (a - b).abs()] {
        let mut entries: Vec<Rational> = permuted.entries()[..n - 2].to_vec();
        entries.push(closing);
        let candidate = LengthVector::new(entries)?;
        if candidate.is_nonempty() {
            out.push(candidate);
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> Option<i64> {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    i64::try_from(acc).ok()
}
