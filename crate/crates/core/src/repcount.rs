//! Exact representation counts on finite sets.
//!
//! Four counting functions are provided for a finite set `A` and order `h`:
//!
//! | function | counts |
//! |---|---|
//! | [`count_unordered`] `r` | multisets `a_1 <= ... <= a_h` |
//! | [`count_ordered`] `R` | ordered tuples |
//! | [`count_restricted`] `r̂` | sets `a_1 < ... < a_h` |
//! | [`count_restricted_ordered`] `R̂` | ordered tuples of distinct elements |
//!
//! Everything is computed by walking sorted index tuples with a feasibility
//! prune on the partial sum, so elements may be arbitrarily large.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("the set is empty")]
    EmptySet,
}

/// A finite set of integers, stored sorted and without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    elements: Vec<BigInt>,
}

impl FiniteSet {
    pub fn new(elements: impl IntoIterator<Item = BigInt>) -> Self {
        let mut elements: Vec<BigInt> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        FiniteSet { elements }
    }

    pub fn from_i64s(elements: &[i64]) -> Self {
        Self::new(elements.iter().map(|&a| BigInt::from(a)))
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &BigInt) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    /// Returns `false` if `a` was already present.
    pub fn insert(&mut self, a: BigInt) -> bool {
        match self.elements.binary_search(&a) {
            Ok(_) => false,
            Err(pos) => {
                self.elements.insert(pos, a);
                true
            }
        }
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn max_abs(&self) -> Option<BigInt> {
        self.iter().map(|a| a.abs()).max()
    }

    pub fn translate(&self, t: &BigInt) -> FiniteSet {
        FiniteSet {
            elements: self.iter().map(|a| a + t).collect(),
        }
    }

    /// `card{a : y <= a <= x}`.
    pub fn count_between(&self, y: &BigInt, x: &BigInt) -> usize {
        if y > x {
            return 0;
        }
        let lo = self.elements.partition_point(|a| a < y);
        let hi = self.elements.partition_point(|a| a <= x);
        hi - lo
    }
}

impl FromIterator<BigInt> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        FiniteSet::new(iter)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Walks index tuples `i_1 <= ... <= i_h` (strictly increasing when
/// `strict`), calling `visit` with the indices and their sum. When `target`
/// is given only tuples summing to it are visited, and branches that cannot
/// reach it are cut. `visit` returns `false` to stop the walk.
struct Walker<'a, F> {
    a: &'a [BigInt],
    strict: bool,
    target: Option<&'a BigInt>,
    stack: Vec<usize>,
    sum: BigInt,
    visit: F,
}

impl<F: FnMut(&[usize], &BigInt) -> bool> Walker<'_, F> {
    fn run(&mut self, start: usize, slots: usize) -> bool {
        if slots == 0 {
            if self.target.is_none_or(|t| *t == self.sum) {
                return (self.visit)(&self.stack, &self.sum);
            }
            return true;
        }
        let a = self.a;
        let max = match a.last() {
            Some(max) => max,
            None => return true,
        };
        for (i, ai) in a.iter().enumerate().skip(start) {
            if let Some(t) = self.target {
                // Every remaining pick is >= a[i] and <= max.
                if &self.sum + ai * slots > *t {
                    break;
                }
                if &self.sum + ai + max * (slots - 1) < *t {
                    continue;
                }
            }
            self.stack.push(i);
            self.sum += ai;
            let next = if self.strict { i + 1 } else { i };
            let go_on = self.run(next, slots - 1);
            self.sum -= &a[i];
            self.stack.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn walk<F>(a: &FiniteSet, h: usize, strict: bool, target: Option<&BigInt>, visit: F)
where
    F: FnMut(&[usize], &BigInt) -> bool,
{
    let mut walker = Walker {
        a: a.elements(),
        strict,
        target,
        stack: Vec::with_capacity(h),
        sum: BigInt::zero(),
        visit,
    };
    walker.run(0, h);
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `C(n + k - 1, k)`, the number of `k`-multisets from `n` items.
pub fn multichoose(n: usize, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let top = (n + k - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (top - i) / (i + 1);
    }
    c as u64
}

/// Number of distinct orderings of a sorted index tuple.
fn orderings(indices: &[usize]) -> u64 {
    let mut weight = factorial(indices.len());
    let mut run = 1;
    for w in indices.windows(2) {
        if w[0] == w[1] {
            run += 1;
            weight /= run;
        } else {
            run = 1;
        }
    }
    weight
}

/// `r_{A,h}(n)`.
pub fn count_unordered(a: &FiniteSet, h: usize, n: &BigInt) -> u64 {
    let mut count = 0;
    walk(a, h, false, Some(n), |_, _| {
        count += 1;
        true
    });
    count
}

/// `R_{A,h}(n)`, summed over multisets with weight `h! / ∏ mult!`.
pub fn count_ordered(a: &FiniteSet, h: usize, n: &BigInt) -> u64 {
    let mut count = 0;
    walk(a, h, false, Some(n), |idx, _| {
        count += orderings(idx);
        true
    });
    count
}

/// `r̂_{A,h}(n)`.
pub fn count_restricted(a: &FiniteSet, h: usize, n: &BigInt) -> u64 {
    let mut count = 0;
    walk(a, h, true, Some(n), |_, _| {
        count += 1;
        true
    });
    count
}

/// `R̂_{A,h}(n)`, by direct enumeration of ordered tuples of distinct
/// elements. Equals `h! · r̂_{A,h}(n)`.
pub fn count_restricted_ordered(a: &FiniteSet, h: usize, n: &BigInt) -> u64 {
    fn go(
        a: &[BigInt],
        used: &mut [bool],
        slots: usize,
        remaining: &BigInt,
        min: &BigInt,
        max: &BigInt,
    ) -> u64 {
        if slots == 0 {
            return u64::from(remaining.is_zero());
        }
        if min * slots > *remaining || max * slots < *remaining {
            return 0;
        }
        let mut count = 0;
        for i in 0..a.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            count += go(a, used, slots - 1, &(remaining - &a[i]), min, max);
            used[i] = false;
        }
        count
    }
    let (Some(min), Some(max)) = (a.elements().first(), a.elements().last()) else {
        return u64::from(h == 0 && n.is_zero());
    };
    if h > a.len() {
        return 0;
    }
    let mut used = vec![false; a.len()];
    go(a.elements(), &mut used, h, n, min, max)
}

/// `r_{A,h}` on its support `hA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepHistogram {
    order: usize,
    counts: BTreeMap<BigInt, u64>,
}

impl RepHistogram {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `r_{A,h}(n)`, zero off the sumset.
    pub fn get(&self, n: &BigInt) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, u64)> {
        self.counts.iter().map(|(n, c)| (n, *c))
    }

    /// The sumset `hA`.
    pub fn support(&self) -> impl Iterator<Item = &BigInt> {
        self.counts.keys()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of multisets, `C(|A| + h - 1, h)`.
    pub fn mass(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

pub fn histogram(a: &FiniteSet, h: usize) -> Result<RepHistogram, RepError> {
    if a.is_empty() {
        return Err(RepError::EmptySet);
    }
    let mut counts = BTreeMap::new();
    walk(a, h, false, None, |_, sum| {
        *counts.entry(sum.clone()).or_insert(0) += 1;
        true
    });
    Ok(RepHistogram { order: h, counts })
}

/// All four representation counts at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RepCounts {
    pub unordered: u64,
    pub ordered: u64,
    pub restricted: u64,
    pub restricted_ordered: u64,
}

/// The four representation functions on the whole sumset `hA`, from one
/// pass over the multisets.
pub fn rep_table(a: &FiniteSet, h: usize) -> Result<BTreeMap<BigInt, RepCounts>, RepError> {
    if a.is_empty() {
        return Err(RepError::EmptySet);
    }
    let h_fact = factorial(h);
    let mut table: BTreeMap<BigInt, RepCounts> = BTreeMap::new();
    walk(a, h, false, None, |idx, sum| {
        let entry = table.entry(sum.clone()).or_default();
        entry.unordered += 1;
        entry.ordered += orderings(idx);
        if idx.windows(2).all(|w| w[0] < w[1]) {
            entry.restricted += 1;
            entry.restricted_ordered += h_fact;
        }
        true
    });
    Ok(table)
}

/// A sum with more than one representation, with its count, if any.
pub fn sidon_witness(a: &FiniteSet, h: usize) -> Option<(BigInt, u64)> {
    let hist = histogram(a, h).ok()?;
    let witness = hist
        .iter()
        .find(|(_, c)| *c > 1)
        .map(|(n, c)| (n.clone(), c));
    witness
}

/// Whether `r_{A,h}(n) <= 1` for all `n`.
pub fn is_sidon(a: &FiniteSet, h: usize) -> bool {
    sidon_witness(a, h).is_none()
}

/// Same answer as [`is_sidon`], stopping at the first repeated sum.
pub fn is_sidon_fast(a: &FiniteSet, h: usize) -> bool {
    let mut seen = HashSet::new();
    let mut sidon = true;
    walk(a, h, false, None, |_, sum| {
        sidon = seen.insert(sum.clone());
        sidon
    });
    sidon
}

/// `(2h - 1) · max|a|`: adjoining any `c` of larger absolute value keeps a
/// Sidon set of order `h` Sidon.
pub fn sidon_extension_bound(a: &FiniteSet, h: usize) -> Result<BigInt, RepError> {
    let d = a.max_abs().ok_or(RepError::EmptySet)?;
    Ok(d * (2 * h as u64).saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> FiniteSet {
        FiniteSet::from_i64s(xs)
    }

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn finite_set_basics() {
        let mut a = set(&[3, -1, 3, 0]);
        assert_eq!(a.elements(), [n(-1), n(0), n(3)]);
        assert!(a.insert(n(2)));
        assert!(!a.insert(n(2)));
        assert_eq!(a.to_string(), "{-1, 0, 2, 3}");
        assert_eq!(a.max_abs(), Some(n(3)));
        assert_eq!(a.count_between(&n(-2), &n(2)), 3);
        assert_eq!(a.count_between(&n(2), &n(-2)), 0);
        assert!(set(&[0, 2]).is_subset(&a));
    }

    #[test]
    fn unordered_examples() {
        assert_eq!(count_unordered(&set(&[0, 1, 2]), 2, &n(2)), 2);
        assert_eq!(count_unordered(&set(&[-1, 1]), 2, &n(0)), 1);
        let a = set(&[-4, 0, 7]);
        for v in -10..=10 {
            let expect = u64::from([-4, 0, 7].contains(&v));
            assert_eq!(count_unordered(&a, 1, &n(v)), expect);
        }
    }

    #[test]
    fn ordered_examples() {
        assert_eq!(count_ordered(&set(&[0, 1, 2]), 2, &n(2)), 3);
        assert_eq!(count_ordered(&set(&[-1, 1]), 2, &n(0)), 2);
        let a = set(&[-3, 1, 5]);
        for v in -6..=6 {
            assert_eq!(count_ordered(&a, 1, &n(v)), count_unordered(&a, 1, &n(v)));
        }
    }

    #[test]
    fn restricted_examples() {
        let a = set(&[0, 1, 2]);
        assert_eq!(count_restricted(&a, 2, &n(2)), 1);
        assert_eq!(count_restricted(&a, 3, &n(3)), 1);
        assert_eq!(count_restricted(&set(&[-1, 1]), 2, &n(0)), 1);
        assert_eq!(count_restricted_ordered(&a, 2, &n(2)), 2);
        assert_eq!(count_restricted_ordered(&a, 3, &n(3)), 6);
        assert_eq!(count_restricted_ordered(&a, 2, &n(4)), 0);
        assert_eq!(count_restricted_ordered(&a, 4, &n(3)), 0);
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&set(&[-1, 1]), 2).unwrap();
        let got: Vec<(i64, u64)> = h.iter().map(|(k, c)| (k.try_into().unwrap(), c)).collect();
        assert_eq!(got, [(-2, 1), (0, 1), (2, 1)]);
        let single = histogram(&set(&[0]), 5).unwrap();
        assert_eq!(single.get(&n(0)), 1);
        assert_eq!(single.len(), 1);
        let stage2 = histogram(&set(&[-6, -1, 1, 5]), 2).unwrap();
        let keys: Vec<i64> = stage2.support().map(|k| k.try_into().unwrap()).collect();
        assert_eq!(keys, [-12, -7, -5, -2, -1, 0, 2, 4, 6, 10]);
        assert_eq!(stage2.max_count(), 1);
        assert_eq!(histogram(&FiniteSet::default(), 2), Err(RepError::EmptySet));
    }

    #[test]
    fn sidon_examples() {
        assert!(is_sidon(&set(&[0, 1, 3]), 2));
        assert!(!is_sidon(&set(&[0, 1, 2]), 2));
        assert_eq!(sidon_witness(&set(&[0, 1, 2]), 2), Some((n(2), 2)));
        assert!(is_sidon(&FiniteSet::default(), 3));
        assert!(is_sidon(&set(&[9]), 4));
        assert!(is_sidon_fast(&set(&[0, 1, 3]), 2));
        assert!(!is_sidon_fast(&set(&[0, 1, 2]), 2));
    }

    #[test]
    fn extension_bound_examples() {
        assert_eq!(sidon_extension_bound(&set(&[0, 1, 3]), 2), Ok(n(9)));
        assert_eq!(sidon_extension_bound(&set(&[-1, 1]), 3), Ok(n(5)));
        assert_eq!(sidon_extension_bound(&set(&[0]), 2), Ok(n(0)));
        assert_eq!(
            sidon_extension_bound(&FiniteSet::default(), 2),
            Err(RepError::EmptySet)
        );
    }

    #[test]
    fn rep_table_agrees_with_point_counts() {
        let a = set(&[-5, -2, 0, 1, 4]);
        for h in 1..=4 {
            let table = rep_table(&a, h).unwrap();
            for (v, counts) in &table {
                assert_eq!(counts.unordered, count_unordered(&a, h, v));
                assert_eq!(counts.ordered, count_ordered(&a, h, v));
                assert_eq!(counts.restricted, count_restricted(&a, h, v));
                assert_eq!(
                    counts.restricted_ordered,
                    count_restricted_ordered(&a, h, v)
                );
            }
        }
    }

    #[test]
    fn multichoose_values() {
        assert_eq!(multichoose(3, 2), 6);
        assert_eq!(multichoose(4, 2), 10);
        assert_eq!(multichoose(20, 4), 8855);
        assert_eq!(multichoose(0, 0), 1);
        assert_eq!(multichoose(0, 3), 0);
    }

    #[test]
    fn huge_elements() {
        let big = BigInt::from(10).pow(30u32);
        let a = FiniteSet::new([-&big, BigInt::from(1), big.clone() * 3]);
        assert_eq!(count_unordered(&a, 2, &(&big * 2)), 1);
        assert!(is_sidon(&a, 3));
    }
}
