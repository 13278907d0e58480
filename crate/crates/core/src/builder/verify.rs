//! Independent replay of a finished construction.
//!
//! Nothing here reads builder state: stages are rebuilt from the step
//! records, the enumeration `U` is regenerated from `f`, and every count
//! comes from the brute-force routines in [`crate::repcount`].

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{stages, BuilderConfig, Certificate, CheckResult, Decision, StepRecord};
use crate::repcount::{self, histogram, FiniteSet, RepHistogram};
use crate::targetfn::sparsity_threshold;
use crate::useq::{u_bound, u_bound_check, u_stream};

/// Check names, in certificate order.
pub const CHECKS: [&str; 11] = [
    "history",
    "u_sequence",
    "u_bound",
    "decisions",
    "growth",
    "cond_i",
    "cond_ii",
    "cond_iii",
    "cond_iv",
    "increments",
    "sparsity",
];

/// First failure per check; later failures of the same check are dropped.
struct Ledger {
    failures: HashMap<&'static str, String>,
}

impl Ledger {
    fn fail(&mut self, check: &'static str, witness: impl FnOnce() -> String) {
        debug_assert!(CHECKS.contains(&check));
        self.failures.entry(check).or_insert_with(witness);
    }

    fn require(&mut self, ok: bool, check: &'static str, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(check, witness);
        }
    }

    fn into_results(mut self) -> Vec<CheckResult> {
        CHECKS
            .iter()
            .map(|&name| {
                let witness = self.failures.remove(name);
                CheckResult {
                    name: name.to_owned(),
                    passed: witness.is_none(),
                    witness,
                }
            })
            .collect()
    }
}

/// The `x` values at which `A_k(-x, x) <= φ(x)` is checked: `0`, every
/// `|c_k|` and its two neighbours, and the largest `|a|`.
pub fn sparsity_probes(set: &FiniteSet, history: &[StepRecord]) -> BTreeSet<BigInt> {
    let mut probes = BTreeSet::from([BigInt::zero()]);
    for c in history.iter().filter_map(|r| r.c.as_ref()) {
        let c = c.abs();
        probes.insert(&c - 1);
        probes.insert(&c + 1);
        probes.insert(c);
    }
    if let Some(m) = set.max_abs() {
        probes.insert(m);
    }
    probes.retain(|x| !x.is_negative());
    probes
}

fn describe_difference(replayed: &FiniteSet, given: &FiniteSet) -> String {
    let extra: Vec<String> = given
        .iter()
        .filter(|a| !replayed.contains(a))
        .map(|a| a.to_string())
        .collect();
    let missing: Vec<String> = replayed
        .iter()
        .filter(|a| !given.contains(a))
        .map(|a| a.to_string())
        .collect();
    format!(
        "set differs from replayed steps: extra [{}] missing [{}]",
        extra.join(","),
        missing.join(",")
    )
}

/// Replays every check on the stages described by `history`, taking `set`
/// as the final stage.
pub fn verify(set: &FiniteSet, history: &[StepRecord], config: &BuilderConfig) -> Certificate {
    let h = config.h;
    let f = &config.f;
    let big_k = history.len();
    let mut ledger = Ledger {
        failures: HashMap::new(),
    };

    // Shape of the history.
    ledger.require(big_k == config.max_steps, "history", || {
        format!("{big_k} step records for steps={}", config.max_steps)
    });
    for (i, record) in history.iter().enumerate() {
        ledger.require(record.k == i + 1, "history", || {
            format!("record {} is labelled k={}", i + 1, record.k)
        });
        ledger.require(
            (i == 0) == (record.decision == Decision::Seed),
            "history",
            || format!("k={}: unexpected decision {}", record.k, record.decision),
        );
        let extends = record.decision != Decision::Skip;
        ledger.require(
            record.c.is_some() == extends && record.d_used.is_some() == extends,
            "history",
            || format!("k={}: c/d fields do not match decision", record.k),
        );
    }

    let mut stage_sets = stages(history, h);
    let mut previous = FiniteSet::default();
    for (record, stage) in history.iter().zip(&stage_sets) {
        let added = record.added(h);
        ledger.require(
            stage.len() == previous.len() + added.len(),
            "history",
            || format!("k={}: adjoined elements are not new", record.k),
        );
        previous = stage.clone();
    }
    match stage_sets.last_mut() {
        Some(last) => {
            if last != set {
                ledger.fail("history", || describe_difference(last, set));
                *last = set.clone();
            }
        }
        None => {
            ledger.fail("history", || "no step records".into());
            stage_sets.push(set.clone());
        }
    }

    // The enumeration U.
    let u = u_stream(f, big_k);
    for (record, expected) in history.iter().zip(&u) {
        ledger.require(record.u == *expected, "u_sequence", || {
            format!("k={}: u={} but U gives {expected}", record.k, record.u)
        });
    }
    let delta = f.delta();
    ledger.require(u_bound_check(f, big_k), "u_bound", || {
        "U exceeds its bound".into()
    });
    for record in history {
        let bound = u_bound(record.k as u64, delta);
        ledger.require(record.u.unsigned_abs() <= bound, "u_bound", || {
            format!("k={}: |u|={} > {bound}", record.k, record.u.unsigned_abs())
        });
    }

    let hists: Vec<Option<RepHistogram>> =
        stage_sets.iter().map(|s| histogram(s, h).ok()).collect();

    // Decisions and the choice of c.
    let mut occurrences: HashMap<i64, u64> = HashMap::new();
    for (i, record) in history.iter().enumerate() {
        let need = {
            let seen = occurrences.entry(record.u).or_insert(0);
            *seen += 1;
            *seen
        };
        let u_big = BigInt::from(record.u);
        if i > 0 {
            let have = repcount::count_unordered(&stage_sets[i - 1], h, &u_big);
            let expected = if have >= need {
                Decision::Skip
            } else {
                Decision::Extend
            };
            ledger.require(record.decision == expected, "decisions", || {
                format!(
                    "k={}: r({})={have}, need {need}, so expected {expected}, got {}",
                    record.k, record.u, record.decision
                )
            });
        }

        let w = sparsity_threshold(&config.phi, record.k as u64);
        ledger.require(record.w == w, "growth", || {
            format!("k={}: w={} but threshold is {w}", record.k, record.w)
        });
        let (Some(c), Some(d_used)) = (&record.c, &record.d_used) else {
            continue;
        };
        let d = if i == 0 {
            BigInt::from(f.d0())
        } else {
            stage_sets[i - 1]
                .max_abs()
                .unwrap_or_default()
                .max(u_big.abs())
        };
        ledger.require(*d_used == d, "growth", || {
            format!("k={}: d={d_used} but recomputed {d}", record.k)
        });
        ledger.require(c.is_positive() == (record.u >= 0), "growth", || {
            format!(
                "k={}: c={c} has the wrong sign for u={}",
                record.k, record.u
            )
        });
        let mag = c.abs();
        ledger.require(mag > &d * (2 * h), "growth", || {
            format!("k={}: |c|={mag} <= 2h·d = {}", record.k, &d * (2 * h))
        });
        ledger.require(mag >= record.w, "growth", || {
            format!("k={}: |c|={mag} < w={}", record.k, record.w)
        });
        let top = (c * (h - 1) + record.u).abs();
        ledger.require(mag.clone().min(top) > d, "growth", || {
            format!("k={}: new elements do not clear d={d}", record.k)
        });
    }

    // Conditions (i)-(iv) at every stage.
    let mut occurrences: HashMap<i64, u64> = HashMap::new();
    for (i, stage) in stage_sets.iter().enumerate() {
        let k = i + 1;
        if let Some(record) = history.get(i) {
            *occurrences.entry(record.u).or_insert(0) += 1;
        }
        let Some(hist) = &hists[i] else {
            ledger.fail("cond_ii", || format!("k={k}: stage is empty"));
            continue;
        };
        for (n, count) in hist.iter() {
            let fv = f.eval(n);
            ledger.require(fv.covers(count), "cond_i", || {
                format!("k={k}: r({n})={count} > f({n})={fv}")
            });
        }
        for (&n, &times) in &occurrences {
            let count = hist.get(&BigInt::from(n));
            ledger.require(count >= times, "cond_ii", || {
                format!("k={k}: r({n})={count} < {times} occurrences")
            });
        }
        ledger.require(stage.len() <= 2 * k, "cond_iii", || {
            format!("k={k}: |A|={} > {}", stage.len(), 2 * k)
        });
        if let Some((n, count)) = repcount::sidon_witness(stage, h - 1) {
            ledger.fail("cond_iv", || format!("k={k}: r_(h-1)({n})={count}"));
        }
    }

    // Representation increments: the seed stage has every count equal to 1;
    // each extension adds one representation of u_k and only new sums of
    // count 1; a skip changes nothing.
    for (i, record) in history.iter().enumerate() {
        let Some(after) = &hists[i] else { continue };
        let k = record.k;
        if i == 0 {
            if let Some((n, c)) = after.iter().find(|(_, c)| *c != 1) {
                ledger.fail("increments", || format!("k=1: r({n})={c}, expected 1"));
            }
            continue;
        }
        let Some(before) = &hists[i - 1] else {
            continue;
        };
        let u = BigInt::from(record.u);
        let bump = u64::from(record.decision == Decision::Extend);
        for (n, b) in before.iter() {
            let expected = if *n == u { b + bump } else { b };
            let a = after.get(n);
            ledger.require(a == expected, "increments", || {
                format!("k={k}: r({n}) went from {b} to {a}")
            });
        }
        for (n, a) in after.iter() {
            if before.get(n) > 0 {
                continue;
            }
            let expected = if bump == 0 { 0 } else { 1 };
            ledger.require(a == expected, "increments", || {
                format!("k={k}: new sum {n} has r={a}, expected {expected}")
            });
        }
    }

    // Sparsity at the probe points.
    let probes = sparsity_probes(set, history);
    for (i, stage) in stage_sets.iter().enumerate() {
        for x in &probes {
            let count = stage.count_between(&-x, x);
            ledger.require(config.phi.reaches(x, count as u64), "sparsity", || {
                format!(
                    "k={}: A(-{x},{x})={count} > φ({x})≈{:.3}",
                    i + 1,
                    config
                        .phi
                        .approx(x.to_string().parse().unwrap_or(f64::INFINITY))
                )
            });
        }
    }

    Certificate {
        config: config.clone(),
        set: set.clone(),
        history: history.to_vec(),
        checks: ledger.into_results(),
    }
}
