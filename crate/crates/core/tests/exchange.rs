//! Both exchange variants against exhaustive search for valid outputs.

use matroid_cb::exchange::{
    kundu_lawler_greedy, kundu_lawler_ordered, kundu_lawler_ordered_full, reduce_common, ExchangeInstance, TieBreak,
};
use matroid_cb::oracle::fixtures::fan;
use matroid_cb::oracle::gen::{self, InstanceSeed, Mix, Shape};
use matroid_cb::order::{ElementOrder, SubsetOrder};
use matroid_cb::{Element, ElementSet, MatroidExpr};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spans(m: &MatroidExpr, i: &ElementSet, x: &ElementSet) -> bool {
    m.rank(&i.union(x)).unwrap() == m.rank(i).unwrap()
}

/// Every common independent `I` spanning `I0` in `M0` and `I1` in `M1`.
fn valid_outputs(inst: &ExchangeInstance) -> Vec<ElementSet> {
    inst.ground()
        .subsets()
        .filter(|i| {
            inst.m0.independent(i) && inst.m1.independent(i) && spans(&inst.m0, i, &inst.i0) && spans(&inst.m1, i, &inst.i1)
        })
        .collect()
}

fn instance(seed: u64, elements: usize, mix: Mix) -> ExchangeInstance {
    gen::exchange(InstanceSeed::new(
        seed,
        Shape {
            elements,
            mix,
            ..Shape::default()
        },
    ))
    .unwrap()
}

fn mix() -> impl Strategy<Value = Mix> {
    prop_oneof![Just(Mix::All), Just(Mix::Graphic), Just(Mix::Partition), Just(Mix::Uniform)]
}

/// A random order on the reduced ground set with `I1` first.
fn shuffled_order(inst: &ExchangeInstance, seed: u64) -> ElementOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut head: Vec<Element> = inst.i1.iter().collect();
    let mut tail: Vec<Element> = inst.ground().difference(&inst.i1).iter().collect();
    head.shuffle(&mut rng);
    tail.shuffle(&mut rng);
    head.extend(tail);
    ElementOrder::new(head, inst.i1.clone()).unwrap()
}

fn weight(o: &ElementOrder, x: &ElementSet) -> u64 {
    x.iter().map(|e| 1u64 << o.position(e).unwrap()).sum()
}

#[test]
fn seed_42_on_seven_elements() {
    let inst = instance(42, 7, Mix::All);
    let valid = valid_outputs(&inst);
    assert!(!valid.is_empty());
    let greedy = kundu_lawler_greedy(&inst, TieBreak::LeastId).unwrap().set;
    assert!(valid.contains(&greedy), "{greedy:?} not among {valid:?}");
    let (ordered, trace) = kundu_lawler_ordered_full(&inst).unwrap();
    assert!(valid.contains(&ordered));
    trace.check_monovariant().unwrap();
}

#[test]
fn fan_outputs_are_the_ray_plus_one_apex_edge() {
    let f = fan(5).unwrap();
    let mut expected: Vec<ElementSet> = f.apex.iter().map(|a| f.ray.with(a)).collect();
    expected.sort_by_key(|s| s.iter().map(|e| e.0).collect::<Vec<_>>());
    let mut valid = valid_outputs(&f.instance);
    valid.sort_by_key(|s| s.iter().map(|e| e.0).collect::<Vec<_>>());
    assert_eq!(valid, expected);

    let (ordered, _) = kundu_lawler_ordered_full(&f.instance).unwrap();
    let wv0 = f.names.lookup("wv0").unwrap();
    assert_eq!(ordered, f.ray.with(wv0));
    let greedy = kundu_lawler_greedy(&f.instance, TieBreak::LeastId).unwrap().set;
    assert!(expected.contains(&greedy));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_output_is_valid(seed in any::<u64>(), n in 0usize..=9, mix in mix(), tie in 0u64..3) {
        let inst = instance(seed, n, mix);
        let tie = match tie {
            0 => TieBreak::LeastId,
            1 => TieBreak::GreatestId,
            _ => TieBreak::Seeded(seed),
        };
        let out = kundu_lawler_greedy(&inst, tie).unwrap();
        prop_assert!(out.iterations <= inst.i1.len());
        prop_assert!(valid_outputs(&inst).contains(&out.set));
    }

    #[test]
    fn reduced_solutions_lift_to_solutions(seed in any::<u64>(), n in 0usize..=8) {
        let inst = instance(seed, n, Mix::All);
        let (reduced, lift) = reduce_common(&inst).unwrap();
        prop_assert!(reduced.is_reduced());
        prop_assert_eq!(reduced.ground(), &inst.i0.symmetric_difference(&inst.i1));
        let original = valid_outputs(&inst);
        for s in valid_outputs(&reduced) {
            prop_assert!(original.contains(&lift.lift(&s)));
        }
    }

    /// Replays an ordered run: every step follows the entering and leaving
    /// rules, and every recorded witness is the least spanning subset
    /// found by enumeration.
    #[test]
    fn ordered_trace_replays(seed in any::<u64>(), n in 0usize..=9, mix in mix(), order_seed in any::<u64>()) {
        let (reduced, _) = reduce_common(&instance(seed, n, mix)).unwrap();
        let order = shuffled_order(&reduced, order_seed);
        let (out, trace) = kundu_lawler_ordered(&reduced, &order).unwrap();
        prop_assert!(valid_outputs(&reduced).contains(&out));
        trace.check_monovariant().unwrap();

        let mut js: Vec<ElementSet> = trace.steps.iter().map(|s| s.before.clone()).collect();
        js.push(out.clone());
        prop_assert_eq!(&js[0], &reduced.i0);
        for (step, next) in trace.steps.iter().zip(&js[1..]) {
            let j = &step.before;
            let least_unspanned = order
                .sequence()
                .iter()
                .copied()
                .find(|&e| reduced.i1.contains(e) && !spans(&reduced.m1, j, &ElementSet::singleton(e)));
            prop_assert_eq!(Some(step.entering), least_unspanned);
            let mut expected = j.with(step.entering);
            match (&step.circuit, step.leaving) {
                (None, None) => prop_assert!(reduced.m0.independent(&expected)),
                (Some(c), Some(f)) => {
                    prop_assert!(reduced.m0.is_circuit(c.elements()) && c.elements().is_subset(&expected));
                    prop_assert_eq!(f, order.max_element(c.elements()).unwrap());
                    prop_assert!(reduced.i0.contains(f));
                    expected.remove(f);
                }
                _ => prop_assert!(false, "leaving element without circuit"),
            }
            prop_assert_eq!(&expected, next);
        }

        let subset_order = SubsetOrder::new(order.clone());
        for (g, seq) in &trace.witnesses {
            prop_assert_eq!(seq.len(), js.len());
            for (w, j) in seq.iter().zip(&js) {
                let least = j
                    .subsets()
                    .filter(|s| spans(&reduced.m0, s, &ElementSet::singleton(*g)))
                    .min_by_key(|s| weight(&order, s))
                    .unwrap();
                prop_assert_eq!(w, &least);
            }
            for pair in seq.windows(2) {
                prop_assert!(!subset_order.precedes(&pair[0], &pair[1]).unwrap());
            }
        }
    }
}
