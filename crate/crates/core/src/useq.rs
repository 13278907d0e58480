//! The enumeration `U` of the integers in which each `n` occurs exactly
//! `f(n)` times.
//!
//! `U` is a subsequence of the fixed sequence
//!
//! ```text
//! V = 0, -1, 0, 1, -2, -1, 0, 1, 2, -3, ...
//! ```
//!
//! where index `m = s² + s + 1 + r` (with `|r| <= s`) carries the value
//! `v_m = r`. The occurrence of `r` at row `s` is its `(s - |r| + 1)`-th
//! occurrence in `V`, and it is kept in `U` exactly when that ordinal does
//! not exceed `f(r)`. The resulting terms satisfy `|u_k| <= ⌊(k + Δ)/2⌋`.

use num_integer::Roots;
use thiserror::Error;

use crate::targetfn::TargetFunction;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("V is indexed from 1, got m = {0}")]
pub struct InvalidIndex(pub u64);

/// The decomposition `m = s² + s + 1 + r`, `|r| <= s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VIndex {
    pub m: u64,
    pub s: u64,
    pub r: i64,
}

impl VIndex {
    /// The index in `V` of the value `r` on row `s` (requires `|r| <= s`).
    pub fn compose(s: u64, r: i64) -> u64 {
        debug_assert!(r.unsigned_abs() <= s);
        (s * s + s + 1).wrapping_add_signed(r)
    }

    /// Which occurrence of `r` in `V` this index is, counting from 1.
    pub fn ordinal(&self) -> u64 {
        self.s - self.r.unsigned_abs() + 1
    }
}

pub fn v_decompose(m: u64) -> Result<VIndex, InvalidIndex> {
    if m == 0 {
        return Err(InvalidIndex(m));
    }
    // Row s spans s² + 1 ..= (s + 1)².
    let s = (m - 1).sqrt();
    let r = m as i64 - (s * s + s + 1) as i64;
    Ok(VIndex { m, s, r })
}

/// Whether the `V` term at `idx` belongs to `U`.
pub fn admitted(f: &TargetFunction, idx: &VIndex) -> bool {
    f.eval_i64(idx.r).covers(idx.ordinal())
}

/// One term of `U` together with the `V` index it was taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UTerm {
    pub k: u64,
    pub m: u64,
    pub value: i64,
}

/// Resumable cursor over `U`. The stream never ends, because `f` is nonzero
/// outside a finite window.
#[derive(Clone, Debug)]
pub struct UStream {
    f: TargetFunction,
    cursor_m: u64,
    emitted: u64,
}

impl UStream {
    pub fn new(f: TargetFunction) -> Self {
        UStream {
            f,
            cursor_m: 1,
            emitted: 0,
        }
    }

    pub fn target(&self) -> &TargetFunction {
        &self.f
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn next_term(&mut self) -> UTerm {
        loop {
            let idx = v_decompose(self.cursor_m).expect("cursor starts at 1");
            self.cursor_m += 1;
            if admitted(&self.f, &idx) {
                self.emitted += 1;
                return UTerm {
                    k: self.emitted,
                    m: idx.m,
                    value: idx.r,
                };
            }
        }
    }
}

impl Iterator for UStream {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        Some(self.next_term().value)
    }
}

/// The first `count` terms `u_1, ..., u_count`.
pub fn u_stream(f: &TargetFunction, count: usize) -> Vec<i64> {
    UStream::new(f.clone()).take(count).collect()
}

/// `⌊(k + Δ)/2⌋`.
pub fn u_bound(k: u64, delta: u64) -> u64 {
    (k + delta) / 2
}

pub fn u_bound_check(f: &TargetFunction, count: usize) -> bool {
    let delta = f.delta();
    UStream::new(f.clone())
        .take(count)
        .zip(1u64..)
        .all(|(u, k)| u.unsigned_abs() <= u_bound(k, delta))
}

/// How many of `v_1, ..., v_m` are kept in `U`.
///
/// Row by row, `r` has occurred `s - |r|` times before row `s` and once
/// more on row `s` if its slot is at most `m`; at most `f(r)` of those
/// occurrences are kept. `O(√m)`.
pub fn admitted_count(f: &TargetFunction, m: u64) -> u64 {
    let Ok(last) = v_decompose(m) else {
        return 0;
    };
    let s = last.s as i64;
    (-s..=s)
        .map(|r| {
            let seen = (s - r.abs()) as u64 + u64::from(r <= last.r);
            f.eval_i64(r).finite().map_or(seen, |v| v.min(seen))
        })
        .sum()
}

/// Position in `U` of the last occurrence of `n`.
///
/// `None` when `f(n) = ∞`; `Some(0)` when `f(n) = 0`. Computed from the
/// `V` index of that occurrence, without running the stream.
pub fn last_occurrence(f: &TargetFunction, n: i64) -> Option<u64> {
    let multiplicity = f.eval_i64(n).finite()?;
    if multiplicity == 0 {
        return Some(0);
    }
    let last_m = VIndex::compose(n.unsigned_abs() + multiplicity - 1, n);
    Some(admitted_count(f, last_m))
}
