mod common;

use addbasis::repcount::{
    count_ordered, count_restricted, count_restricted_ordered, count_unordered, factorial,
    histogram, is_sidon, is_sidon_fast, multichoose, rep_table, sidon_extension_bound, FiniteSet,
};
use common::{big, brute_counts};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_set() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-30i64..=30, 1..=6).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #[test]
    fn point_counts_match_cartesian_oracle(a in small_set(), h in 1usize..=4) {
        let set = FiniteSet::from_i64s(&a);
        let brute = brute_counts(&a, h);
        for (&n, &[r, rr, rh, rrh]) in &brute {
            let n = big(n);
            prop_assert_eq!(count_unordered(&set, h, &n), r);
            prop_assert_eq!(count_ordered(&set, h, &n), rr);
            prop_assert_eq!(count_restricted(&set, h, &n), rh);
            prop_assert_eq!(count_restricted_ordered(&set, h, &n), rrh);
        }
        // Off the sumset everything is zero.
        let outside = big(31 * h as i64 + 1);
        prop_assert_eq!(count_unordered(&set, h, &outside), 0);
        prop_assert_eq!(count_ordered(&set, h, &outside), 0);
    }

    #[test]
    fn restricted_ordered_is_factorial_multiple(a in small_set(), h in 1usize..=4, n in -120i64..=120) {
        let set = FiniteSet::from_i64s(&a);
        let n = big(n);
        prop_assert_eq!(
            count_restricted_ordered(&set, h, &n),
            factorial(h) * count_restricted(&set, h, &n)
        );
    }

    #[test]
    fn histogram_mass_and_support(a in small_set(), h in 1usize..=4) {
        let set = FiniteSet::from_i64s(&a);
        let hist = histogram(&set, h).unwrap();
        prop_assert_eq!(hist.mass(), multichoose(a.len(), h));
        let brute = brute_counts(&a, h);
        let keys: Vec<BigInt> = brute.keys().map(|&k| big(k)).collect();
        let support: Vec<BigInt> = hist.support().cloned().collect();
        prop_assert_eq!(support, keys);
        let table = rep_table(&set, h).unwrap();
        for (n, counts) in &table {
            prop_assert_eq!(counts.unordered, hist.get(n));
        }
    }

    #[test]
    fn translation_law(a in small_set(), h in 1usize..=4, t in -10i64..=10) {
        let set = FiniteSet::from_i64s(&a);
        let shifted = set.translate(&big(t));
        let base = histogram(&set, h).unwrap();
        let moved = histogram(&shifted, h).unwrap();
        prop_assert_eq!(base.len(), moved.len());
        for (n, c) in moved.iter() {
            prop_assert_eq!(c, base.get(&(n - big(t) * h)));
        }
    }

    #[test]
    fn fast_sidon_agrees(a in small_set(), h in 1usize..=4) {
        let set = FiniteSet::from_i64s(&a);
        prop_assert_eq!(is_sidon(&set, h), is_sidon_fast(&set, h));
    }
}

/// Random Sidon sets of order `h`, drawn by rejection.
fn random_sidon(rng: &mut ChaCha8Rng, h: usize) -> FiniteSet {
    loop {
        let size = rng.gen_range(1..=5);
        let set = FiniteSet::new((0..size).map(|_| big(rng.gen_range(-20..=20))));
        if is_sidon(&set, h) {
            return set;
        }
    }
}

#[test]
fn sidon_extension_and_downward_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let h = rng.gen_range(2..=3);
        let set = random_sidon(&mut rng, h);
        for j in 1..=h {
            assert!(is_sidon(&set, j), "{set} Sidon of order {h} but not {j}");
        }
        let gap: i64 = rng.gen_range(1..=50);
        let mut c = sidon_extension_bound(&set, h).unwrap() + gap;
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let mut extended = set.clone();
        extended.insert(c.clone());
        assert!(
            is_sidon(&extended, h),
            "{set} ∪ {{{c}}} not Sidon of order {h}"
        );
    }
}

#[test]
fn extension_bound_cannot_drop_to_twice_max() {
    // {0, 1} ∪ {2} collides (0 + 2 = 1 + 1); {0, 1} ∪ {3} does not.
    let a = FiniteSet::from_i64s(&[0, 1]);
    assert_eq!(sidon_extension_bound(&a, 2).unwrap(), big(3));
    let mut b = a.clone();
    b.insert(big(2));
    assert!(!is_sidon(&b, 2));
    let mut c = a.clone();
    c.insert(big(3));
    assert!(is_sidon(&c, 2));
}
