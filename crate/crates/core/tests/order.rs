//! The subset order against the binary-number reading, exhaustively on
//! small ground sets.

use std::cmp::Ordering;

use matroid_cb::order::{ElementOrder, SubsetOrder};
use matroid_cb::oracle::gen::{random_matroid, Mix};
use matroid_cb::{Element, ElementSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random order on `0..n` whose first `k` positions form the initial
/// segment.
fn random_order(seed: u64, n: usize, k: usize) -> ElementOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq: Vec<Element> = (0..n).map(Element).collect();
    seq.shuffle(&mut rng);
    let initial = seq[..k.min(n)].iter().copied().collect();
    ElementOrder::new(seq, initial).unwrap()
}

/// `X` read as the binary number with bit `p` set when the element at
/// position `p` belongs to `X`.
fn weight(o: &ElementOrder, x: &ElementSet) -> u64 {
    x.iter().map(|e| 1u64 << o.position(e).unwrap()).sum()
}

fn all_subsets(n: usize) -> Vec<ElementSet> {
    ElementSet::full(n).subsets().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compare_is_binary_comparison(seed in any::<u64>(), k in 0usize..=6) {
        let base = random_order(seed, 6, k);
        let o = SubsetOrder::new(base.clone());
        let subsets = all_subsets(6);
        for x in &subsets {
            for y in &subsets {
                prop_assert_eq!(o.compare(x, y).unwrap(), weight(&base, x).cmp(&weight(&base, y)));
            }
        }
    }

    #[test]
    fn compare_is_total_and_transitive(seed in any::<u64>()) {
        let o = SubsetOrder::new(random_order(seed, 5, 2));
        let subsets = all_subsets(5);
        for x in &subsets {
            for y in &subsets {
                let xy = o.compare(x, y).unwrap();
                prop_assert_eq!(xy == Ordering::Equal, x == y);
                prop_assert_eq!(xy.reverse(), o.compare(y, x).unwrap());
                if xy != Ordering::Less {
                    continue;
                }
                for z in &subsets {
                    if o.precedes(y, z).unwrap() {
                        prop_assert!(o.precedes(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn adding_an_element_outside_y_minus_x_preserves_order(seed in any::<u64>()) {
        let o = SubsetOrder::new(random_order(seed, 6, 3));
        let subsets = all_subsets(6);
        for x in &subsets {
            for y in subsets.iter().filter(|y| o.precedes(x, y).unwrap()) {
                let excluded = y.difference(x);
                for z in (0..6).map(Element).filter(|&z| !excluded.contains(z)) {
                    prop_assert!(o.precedes(&x.with(z), &y.with(z)).unwrap(), "{:?} {:?} {}", x, y, z);
                }
            }
        }
    }

    #[test]
    fn lower_sets_precede_higher_sets(seed in any::<u64>()) {
        let base = random_order(seed, 6, 2);
        let o = SubsetOrder::new(base.clone());
        for x in all_subsets(6) {
            for y in all_subsets(6).into_iter().filter(|y| !y.is_empty()) {
                let below = x.iter().all(|a| y.iter().all(|b| base.position(a) < base.position(b)));
                if below {
                    prop_assert!(o.precedes(&x, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn max_element_has_greatest_position(seed in any::<u64>(), k in 0usize..=6) {
        let base = random_order(seed, 6, k);
        for x in all_subsets(6).into_iter().filter(|x| !x.is_empty()) {
            let m = base.max_element(&x).unwrap();
            prop_assert!(x.iter().all(|e| base.position(e) <= base.position(m)));
        }
    }

    /// On monotone predicates the greedy search finds the least accepted
    /// subset found by sorting every subset.
    #[test]
    fn least_accepted_matches_enumeration(seed in any::<u64>(), n in 1usize..=7) {
        let base = random_order(seed, n, n / 2);
        let o = SubsetOrder::new(base.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let m = random_matroid(&mut rng, Mix::All, &ElementSet::full(n));
        let ground = ElementSet::full(n);
        for g in 0..n {
            let g = Element(g);
            let pool = ground.without(g);
            if !m.spans_element(&pool, g) {
                prop_assert!(!m.spans_element(&ElementSet::new(), g));
                continue;
            }
            let accept = |s: &ElementSet| m.spans_element(s, g);
            let expected = pool
                .subsets()
                .filter(|s| accept(s))
                .min_by_key(|s| weight(&base, s))
                .unwrap();
            prop_assert_eq!(o.least_accepted(&pool, accept).unwrap(), expected);
        }
    }
}

#[test]
fn literal_observation_fails_for_z_in_y_minus_x() {
    let base = ElementOrder::new(vec![Element(0), Element(1)], ElementSet::new()).unwrap();
    let o = SubsetOrder::new(base);
    let (a, b) = (Element(0), Element(1));
    let x = ElementSet::singleton(a);
    let y = ElementSet::singleton(b);
    assert!(o.precedes(&x, &y).unwrap());
    assert!(!o.precedes(&x.with(b), &y.with(b)).unwrap());
}

#[test]
fn initial_segment_must_be_a_prefix() {
    let seq = vec![Element(0), Element(1), Element(2)];
    assert!(ElementOrder::new(seq.clone(), ElementSet::from([1])).is_err());
    assert!(ElementOrder::new(seq, ElementSet::from([0, 1])).is_ok());
}

#[test]
fn unknown_elements_are_input_errors() {
    let base = ElementOrder::new(vec![Element(0), Element(1)], ElementSet::new()).unwrap();
    let o = SubsetOrder::new(base.clone());
    assert!(o.compare(&ElementSet::from([3]), &ElementSet::new()).is_err());
    assert!(base.max_element(&ElementSet::new()).is_err());
}
