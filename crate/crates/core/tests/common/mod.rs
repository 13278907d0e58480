//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles enumerate the full Cartesian power `A^h` and share no code
//! with the pruned walkers in `addbasis::repcount`.
#![allow(dead_code)]

use std::collections::BTreeMap;

use addbasis::builder::CSelectionPolicy;
use addbasis::targetfn::{ExtCount, PhiFamily, SparsityBound, TargetFunction};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn ones() -> TargetFunction {
    TargetFunction::constant(ExtCount::Finite(1)).unwrap()
}

pub fn twos() -> TargetFunction {
    TargetFunction::constant(ExtCount::Finite(2)).unwrap()
}

/// `f(0) = ∞`, `f(n) = 1` otherwise.
pub fn one_infinite() -> TargetFunction {
    let mut f = TargetFunction::with_window(0, 0, ExtCount::Finite(1)).unwrap();
    f.set(0, ExtCount::Infinite).unwrap();
    f
}

pub fn fixtures() -> Vec<(&'static str, TargetFunction)> {
    vec![
        ("f=1", ones()),
        ("f=2", twos()),
        ("odd-gap-1", TargetFunction::symmetric_gap(1)),
        ("even-gap-2", TargetFunction::shifted_gap(2)),
        ("inf-at-0", one_infinite()),
    ]
}

fn rats(xs: &[i64]) -> Vec<BigRational> {
    xs.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

pub fn phi_identity() -> SparsityBound {
    SparsityBound::identity()
}

pub fn phi_log() -> SparsityBound {
    SparsityBound::from_params(PhiFamily::LogScaled, &rats(&[2])).unwrap()
}

/// 10 up to x = 100, then growing with slope 1.
pub fn phi_table() -> SparsityBound {
    SparsityBound::from_params(PhiFamily::Table, &rats(&[0, 10, 100, 10, 1])).unwrap()
}

/// Large enough that `w_k = 0` for every stage the tests build.
pub fn phi_flat() -> SparsityBound {
    SparsityBound::from_params(PhiFamily::Table, &rats(&[0, 1000, 1])).unwrap()
}

pub fn phis() -> Vec<(&'static str, SparsityBound)> {
    vec![
        ("phi=x", phi_identity()),
        ("phi=2log2(1+x)", phi_log()),
        ("phi=table", phi_table()),
    ]
}

pub fn policies() -> Vec<(&'static str, CSelectionPolicy)> {
    vec![
        ("minimal", CSelectionPolicy::minimal()),
        ("seed=1", CSelectionPolicy::seeded(1, 1000)),
        ("seed=2", CSelectionPolicy::seeded(2, 1000)),
    ]
}

/// Every ordered `h`-tuple of indices into `len` items.
fn tuples(len: usize, h: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..h {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..len).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Brute-force `(r, R, r̂, R̂)` for every sum, from the full Cartesian power.
pub fn brute_counts(a: &[i64], h: usize) -> BTreeMap<i64, [u64; 4]> {
    let mut sorted = a.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out: BTreeMap<i64, [u64; 4]> = BTreeMap::new();
    for t in tuples(sorted.len(), h) {
        let sum: i64 = t.iter().map(|&i| sorted[i]).sum();
        let entry = out.entry(sum).or_default();
        let nondecreasing = t.windows(2).all(|w| w[0] <= w[1]);
        let increasing = t.windows(2).all(|w| w[0] < w[1]);
        let mut distinct = t.clone();
        distinct.sort();
        distinct.dedup();
        let all_distinct = distinct.len() == t.len();
        entry[0] += u64::from(nondecreasing);
        entry[1] += 1;
        entry[2] += u64::from(increasing);
        entry[3] += u64::from(all_distinct);
    }
    out
}

/// The extremal sequence for `Δ = 2δ + 1`: `u_{2i-1} = δ + i`,
/// `u_{2i} = -(δ + i)`.
pub fn odd_extremal(delta: i64, k: u64) -> i64 {
    let i = k.div_ceil(2) as i64;
    if !k.is_multiple_of(2) {
        delta + i
    } else {
        -(delta + i)
    }
}

/// The extremal sequence for `Δ = 2δ`: `u_1 = δ`, `u_{2i} = δ + i`,
/// `u_{2i+1} = -(δ + i)`.
pub fn even_extremal(delta: i64, k: u64) -> i64 {
    if k == 1 {
        return delta;
    }
    let i = (k / 2) as i64;
    if k.is_multiple_of(2) {
        delta + i
    } else {
        -(delta + i)
    }
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// The three canned corruptions of a rendered certificate.
pub fn tampered(certificate: &str) -> Vec<(&'static str, String)> {
    let lines: Vec<&str> = certificate.lines().collect();
    let rejoin = |ls: Vec<String>| ls.join("\n") + "\n";

    let extra = rejoin(
        lines
            .iter()
            .map(|l| match l.strip_prefix("set\t") {
                Some(rest) => {
                    let present: Vec<i64> = rest.split(',').map(|x| x.parse().unwrap()).collect();
                    let fresh = (1..).find(|x| !present.contains(x)).unwrap();
                    format!("set\t{rest},{fresh}")
                }
                None => l.to_string(),
            })
            .collect(),
    );

    // Bump |c_k| of the first extend step by one.
    let mut bumped = false;
    let altered = rejoin(
        lines
            .iter()
            .map(|l| {
                let mut fields: Vec<String> = l.split('\t').map(String::from).collect();
                if !bumped && fields.len() == 7 && fields[0] == "step" && fields[3] == "extend" {
                    let c: i64 = fields[4].parse().unwrap();
                    fields[4] = (c + c.signum()).to_string();
                    bumped = true;
                }
                fields.join("\t")
            })
            .collect(),
    );
    assert!(bumped, "certificate has no extend step");

    let last_step = lines.iter().rposition(|l| l.starts_with("step\t")).unwrap();
    let deleted = rejoin(
        lines
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != last_step)
            .map(|(_, l)| l.to_string())
            .collect(),
    );

    vec![
        ("extra element", extra),
        ("altered c_k", altered),
        ("deleted step line", deleted),
    ]
}
