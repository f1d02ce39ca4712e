//! Common-spanning exchange: given sets `I0`, `I1` independent in both
//! `M0` and `M1`, find a common independent `I` with `I0 ⊆ span_M0(I)` and
//! `I1 ⊆ span_M1(I)`.
//!
//! Two variants share the same contract:
//!
//! * [`kundu_lawler_greedy`] starts from `J = I0` and repeatedly adds an
//!   element of `I1` not yet `M1`-spanned, dropping some element of the
//!   `M0`-fundamental circuit outside `I1` when independence breaks.
//! * [`kundu_lawler_ordered`] works on the reduced instance (`I0`, `I1`
//!   disjoint and covering the ground set) under a well-order in which `I1`
//!   is an initial segment, always drops the `<`-maximum of the circuit,
//!   and records a trace of every step together with, for each `g ∈ I0`,
//!   the least set `S_g ⊆ J` that spans `g` in `M0`. That sequence never
//!   increases under `≺`, which is the termination argument that carries
//!   over to infinite ground sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::{Element, ElementSet, GroundSet};
use crate::error::{Error, Result};
use crate::matroid::{Circuit, MatroidExpr};
use crate::order::{ElementOrder, SubsetOrder};

#[derive(Clone, Debug)]
pub struct ExchangeInstance {
    pub m0: MatroidExpr,
    pub m1: MatroidExpr,
    pub i0: ElementSet,
    pub i1: ElementSet,
}

impl ExchangeInstance {
    pub fn new(m0: MatroidExpr, m1: MatroidExpr, i0: ElementSet, i1: ElementSet) -> Result<Self> {
        let inst = Self { m0, m1, i0, i1 };
        inst.validate()?;
        Ok(inst)
    }

    pub fn ground(&self) -> &ElementSet {
        self.m0.ground()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m0.ground() != self.m1.ground() {
            return Err(Error::input("M0 and M1 have different ground sets"));
        }
        for (name, set) in [("I0", &self.i0), ("I1", &self.i1)] {
            if !set.is_subset(self.ground()) {
                return Err(Error::input(format!("{name} is not a subset of the ground set")));
            }
            for (mname, m) in [("M0", &self.m0), ("M1", &self.m1)] {
                if !m.independent(set) {
                    return Err(Error::input(format!("{name} is dependent in {mname}")));
                }
            }
        }
        Ok(())
    }

    /// Whether `I0 ∩ I1 = ∅` and `I0 ∪ I1` is the ground set.
    pub fn is_reduced(&self) -> bool {
        self.i0.is_disjoint(&self.i1) && &self.i0.union(&self.i1) == self.ground()
    }
}

/// Maps solutions of a reduced instance back to the original one.
#[derive(Clone, Debug)]
pub struct Lift {
    common: ElementSet,
}

impl Lift {
    pub fn lift(&self, reduced_solution: &ElementSet) -> ElementSet {
        reduced_solution.union(&self.common)
    }
}

/// Contracts `I0 ∩ I1` and deletes everything outside `I0 ∪ I1` in both
/// matroids, leaving an instance on `I0 △ I1`.
pub fn reduce_common(inst: &ExchangeInstance) -> Result<(ExchangeInstance, Lift)> {
    inst.validate()?;
    let common = inst.i0.intersection(&inst.i1);
    let outside = inst.ground().difference(&inst.i0.union(&inst.i1));
    let reduce = |m: &MatroidExpr| -> Result<MatroidExpr> { m.contract(&common)?.delete(&outside) };
    let reduced = ExchangeInstance {
        m0: reduce(&inst.m0)?,
        m1: reduce(&inst.m1)?,
        i0: inst.i0.difference(&common),
        i1: inst.i1.difference(&common),
    };
    Ok((reduced, Lift { common }))
}

/// How the greedy variant picks among several admissible elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LeastId,
    GreatestId,
    /// Uniformly at random from a generator seeded once per run.
    Seeded(u64),
}

struct Picker {
    rule: TieBreak,
    rng: Option<ChaCha8Rng>,
}

impl Picker {
    fn new(rule: TieBreak) -> Self {
        let rng = match rule {
            TieBreak::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            _ => None,
        };
        Self { rule, rng }
    }

    fn pick(&mut self, candidates: &ElementSet) -> Option<Element> {
        match self.rule {
            TieBreak::LeastId => candidates.first(),
            TieBreak::GreatestId => candidates.iter().last(),
            TieBreak::Seeded(_) => candidates.iter().choose(self.rng.as_mut().expect("seeded")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub set: ElementSet,
    pub iterations: usize,
}

fn unspanned(m: &MatroidExpr, j: &ElementSet, targets: &ElementSet) -> ElementSet {
    let r = m.rank_unchecked(j);
    targets
        .iter()
        .filter(|&e| !j.contains(e) && m.rank_unchecked(&j.with(e)) > r)
        .collect()
}

pub fn kundu_lawler_greedy(inst: &ExchangeInstance, tie: TieBreak) -> Result<GreedyOutcome> {
    inst.validate()?;
    let mut picker = Picker::new(tie);
    let mut j = inst.i0.clone();
    let mut iterations = 0;
    loop {
        let candidates = unspanned(&inst.m1, &j, &inst.i1);
        let Some(e) = picker.pick(&candidates) else {
            return Ok(GreedyOutcome { set: j, iterations });
        };
        iterations += 1;
        if iterations > inst.i1.len() {
            return Err(Error::internal(format!(
                "greedy exchange exceeded |I1| = {} iterations",
                inst.i1.len()
            )));
        }
        let before = j.intersection(&inst.i1).len();
        match inst.m0.fundamental_circuit_unchecked(e, &j) {
            None => j.insert(e),
            Some(c) => {
                let outside = c.elements().difference(&inst.i1);
                let f = picker.pick(&outside).ok_or_else(|| {
                    Error::internal(format!(
                        "fundamental circuit {:?} of {e} lies inside I1, which is M0-independent",
                        c.elements()
                    ))
                })?;
                j.insert(e);
                j.remove(f)
            }
        };
        debug_assert!(j.intersection(&inst.i1).len() > before);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeStep {
    pub before: ElementSet,
    pub entering: Element,
    pub leaving: Option<Element>,
    pub circuit: Option<Circuit>,
}

#[derive(Clone, Debug)]
pub struct ExchangeTrace {
    pub order: ElementOrder,
    pub steps: Vec<ExchangeStep>,
    /// For each `g ∈ I0`, the least spanning set `S_g` before the first
    /// step and after every step.
    pub witnesses: BTreeMap<Element, Vec<ElementSet>>,
}

impl ExchangeTrace {
    /// Line-oriented rendering: an `order:` header, then one
    /// `step <n>: +e <id> -f <id|none> circuit {<ids>}` line per step.
    pub fn to_text(&self, ground: &GroundSet) -> String {
        let mut out = String::new();
        let order: Vec<&str> = self.order.sequence().iter().map(|&e| ground.label(e)).collect();
        let _ = writeln!(out, "order: {}", order.join(" "));
        for (n, s) in self.steps.iter().enumerate() {
            let leaving = s.leaving.map_or("none", |f| ground.label(f));
            let circuit = s
                .circuit
                .as_ref()
                .map(|c| ground.format_set(c.elements()))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "step {}: +e {} -f {} circuit {{{}}}",
                n + 1,
                ground.label(s.entering),
                leaving,
                circuit
            );
        }
        out
    }

    /// Re-checks that every witness sequence is `≺`-nonincreasing.
    pub fn check_monovariant(&self) -> Result<()> {
        let order = SubsetOrder::new(self.order.clone());
        for (g, seq) in &self.witnesses {
            for (k, pair) in seq.windows(2).enumerate() {
                if order.precedes(&pair[0], &pair[1])? {
                    return Err(Error::internal(format!(
                        "witness of {g} increased at step {}: {:?} -> {:?}",
                        k + 1,
                        pair[0],
                        pair[1]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The `≺`-least subset of `pool` spanning `g` in `m`.
pub(crate) fn least_spanning_witness(m: &MatroidExpr, order: &SubsetOrder, pool: &ElementSet, g: Element) -> Result<ElementSet> {
    if !m.spans_element(pool, g) {
        return Err(Error::internal(format!("{g} is not spanned by {pool:?}")));
    }
    order.least_accepted(pool, |s| m.spans_element(s, g))
}

fn trace_failure(msg: String, trace: &ExchangeTrace) -> Error {
    Error::internal(format!("{msg}\ntrace so far: {:#?}", trace.steps))
}

/// Order-guided exchange on a reduced instance. The entering element is
/// the `<`-least member of `I1` not spanned in `M1`; the leaving element is
/// the `<`-maximum of its `M0`-fundamental circuit.
pub fn kundu_lawler_ordered(inst: &ExchangeInstance, order: &ElementOrder) -> Result<(ElementSet, ExchangeTrace)> {
    inst.validate()?;
    if !inst.is_reduced() {
        return Err(Error::contract(
            "ordered exchange needs a reduced instance (apply reduce_common first)",
        ));
    }
    if order.initial_segment() != &inst.i1 || !order.contains_all(inst.ground()) {
        return Err(Error::contract(
            "the order must cover the ground set and have I1 as its initial segment",
        ));
    }
    let subset_order = SubsetOrder::new(order.clone());
    let mut j = inst.i0.clone();
    let mut trace = ExchangeTrace {
        order: order.clone(),
        steps: Vec::new(),
        witnesses: BTreeMap::new(),
    };
    for g in inst.i0.iter() {
        trace
            .witnesses
            .insert(g, vec![least_spanning_witness(&inst.m0, &subset_order, &j, g)?]);
    }

    loop {
        let candidates = unspanned(&inst.m1, &j, &inst.i1);
        let Some(&e) = order.sequence().iter().find(|&&x| candidates.contains(x)) else {
            return Ok((j, trace));
        };
        if trace.steps.len() >= inst.i1.len() {
            return Err(trace_failure("ordered exchange did not terminate within |I1| steps".into(), &trace));
        }
        let before = j.clone();
        let circuit = inst.m0.fundamental_circuit_unchecked(e, &j);
        let leaving = match &circuit {
            None => None,
            Some(c) => {
                let f = order.max_element(c.elements())?;
                if !inst.i0.contains(f) || inst.i1.contains(f) {
                    return Err(trace_failure(format!("leaving element {f} is not in I0 \\ I1"), &trace));
                }
                Some(f)
            }
        };
        j.insert(e);
        if let Some(f) = leaving {
            j.remove(f);
        }
        if !inst.m0.independent(&j) || !inst.m1.independent(&j) {
            return Err(trace_failure(format!("J lost common independence at step entering {e}"), &trace));
        }

        for g in inst.i0.iter() {
            let new = least_spanning_witness(&inst.m0, &subset_order, &j, g)
                .map_err(|err| trace_failure(format!("I0 no longer spanned: {err}"), &trace))?;
            let old = trace.witnesses[&g].last().expect("seeded").clone();
            if subset_order.precedes(&old, &new)? {
                return Err(trace_failure(
                    format!("witness of {g} increased: {old:?} -> {new:?}"),
                    &trace,
                ));
            }
            if let (Some(f), Some(c)) = (leaving, &circuit) {
                if old.contains(f) && old != ElementSet::singleton(g) {
                    check_elimination_step(&inst.m0, &subset_order, g, f, &old, c, &new)
                        .map_err(|err| trace_failure(err.to_string(), &trace))?;
                }
            }
            trace.witnesses.get_mut(&g).expect("seeded").push(new);
        }
        trace.steps.push(ExchangeStep {
            before,
            entering: e,
            leaving,
            circuit,
        });
    }
}

/// When the leaving element `f` lies in `S_g = C(g, J) - g`, eliminating
/// `f` between `C(g, J)` and the circuit `c` of the entering element gives
/// a circuit `C''` through `g` inside `C(g, J) ∪ c - f`, and
/// `S_g' ⪯ C'' - g ≺ S_g`.
fn check_elimination_step(
    m0: &MatroidExpr,
    order: &SubsetOrder,
    g: Element,
    f: Element,
    old: &ElementSet,
    c: &Circuit,
    new: &ElementSet,
) -> Result<()> {
    let g_circuit = m0
        .fundamental_circuit_unchecked(g, old)
        .ok_or_else(|| Error::internal(format!("S_g of {g} does not form a circuit with {g}")))?;
    let eliminated = m0.eliminate_circuits(&g_circuit, c, g, f)?;
    let bound = g_circuit.elements().union(c.elements()).without(f);
    if !eliminated.elements().contains(g) || !eliminated.elements().is_subset(&bound) {
        return Err(Error::internal(format!(
            "eliminated circuit {:?} is not inside C ∪ C' - f through {g}",
            eliminated.elements()
        )));
    }
    let via = eliminated.elements().without(g);
    if order.precedes(&via, new)? || !order.precedes(&via, old)? {
        return Err(Error::internal(format!(
            "eliminated circuit {:?} does not sit between the witnesses of {g}",
            eliminated.elements()
        )));
    }
    Ok(())
}

/// Reduces the instance, runs the ordered variant under the default order
/// (canonical order with `I1` moved to the front) and lifts the result.
pub fn kundu_lawler_ordered_full(inst: &ExchangeInstance) -> Result<(ElementSet, ExchangeTrace)> {
    let (reduced, lift) = reduce_common(inst)?;
    let order = ElementOrder::with_initial_segment(reduced.ground(), &reduced.i1)?;
    let (set, trace) = kundu_lawler_ordered(&reduced, &order)?;
    Ok((lift.lift(&set), trace))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Graph;

    fn triangle_plus_free() -> ExchangeInstance {
        // Triangle edges 0,1,2 in M0; M1 free.
        let mut g = Graph::new(3);
        g.add_edge(Element(0), 0, 1).unwrap();
        g.add_edge(Element(1), 1, 2).unwrap();
        g.add_edge(Element(2), 2, 0).unwrap();
        let m0 = MatroidExpr::graphic(Arc::new(g), vec![]).unwrap();
        let m1 = MatroidExpr::free(ElementSet::from([0, 1, 2]));
        ExchangeInstance::new(m0, m1, ElementSet::from([0, 1]), ElementSet::from([1, 2])).unwrap()
    }

    #[test]
    fn reduce_identical_sets() {
        let inst = triangle_plus_free();
        let same = ExchangeInstance::new(inst.m0.clone(), inst.m1.clone(), inst.i0.clone(), inst.i0.clone()).unwrap();
        let (r, lift) = reduce_common(&same).unwrap();
        assert!(r.ground().is_empty());
        assert_eq!(lift.lift(&ElementSet::new()), same.i0);
    }

    #[test]
    fn reduce_contracts_common_part() {
        let inst = triangle_plus_free();
        let (r, lift) = reduce_common(&inst).unwrap();
        assert_eq!(r.ground(), &ElementSet::from([0, 2]));
        // 0 and 2 become parallel once 1 is contracted.
        assert!(!r.m0.independent(&ElementSet::from([0, 2])));
        assert!(r.m1.independent(&ElementSet::from([0, 2])));
        assert_eq!(lift.lift(&ElementSet::from([2])), ElementSet::from([1, 2]));
    }

    #[test]
    fn reduce_disjoint_is_identity() {
        let m = MatroidExpr::free(ElementSet::from([0, 1]));
        let inst = ExchangeInstance::new(m.clone(), m, ElementSet::from([0]), ElementSet::from([1])).unwrap();
        let (r, lift) = reduce_common(&inst).unwrap();
        assert_eq!(r.ground(), inst.ground());
        assert_eq!(r.i0, inst.i0);
        assert_eq!(lift.lift(&ElementSet::from([1])), ElementSet::from([1]));
    }

    #[test]
    fn greedy_returns_i0_when_it_spans() {
        let inst = triangle_plus_free();
        let same = ExchangeInstance::new(inst.m0.clone(), inst.m1.clone(), inst.i0.clone(), inst.i0.clone()).unwrap();
        let out = kundu_lawler_greedy(&same, TieBreak::LeastId).unwrap();
        assert_eq!(out.set, same.i0);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn greedy_exchanges_on_triangle() {
        let inst = triangle_plus_free();
        for tie in [TieBreak::LeastId, TieBreak::GreatestId, TieBreak::Seeded(3)] {
            let out = kundu_lawler_greedy(&inst, tie).unwrap();
            // M1 free: I must contain I1 = {1,2}, and a triangle allows no more.
            assert_eq!(out.set, ElementSet::from([1, 2]));
            assert_eq!(out.iterations, 1);
        }
    }

    #[test]
    fn ordered_with_empty_i1() {
        let m = MatroidExpr::free(ElementSet::from([0, 1]));
        let inst = ExchangeInstance::new(m.clone(), m, ElementSet::from([0, 1]), ElementSet::new()).unwrap();
        let order = ElementOrder::with_initial_segment(inst.ground(), &inst.i1).unwrap();
        let (set, trace) = kundu_lawler_ordered(&inst, &order).unwrap();
        assert_eq!(set, inst.i0);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn ordered_rejects_unreduced_and_bad_order() {
        let inst = triangle_plus_free();
        let order = ElementOrder::with_initial_segment(inst.ground(), &inst.i1).unwrap();
        assert!(matches!(kundu_lawler_ordered(&inst, &order), Err(Error::Contract(_))));
        let (r, _) = reduce_common(&inst).unwrap();
        let wrong = ElementOrder::with_initial_segment(r.ground(), &r.i0).unwrap();
        assert!(matches!(kundu_lawler_ordered(&r, &wrong), Err(Error::Contract(_))));
        let (set, trace) = kundu_lawler_ordered_full(&inst).unwrap();
        assert_eq!(set, ElementSet::from([1, 2]));
        trace.check_monovariant().unwrap();
    }

    #[test]
    fn greedy_rejects_dependent_input() {
        let inst = triangle_plus_free();
        let bad = ExchangeInstance {
            i0: ElementSet::from([0, 1, 2]),
            ..inst
        };
        assert!(matches!(kundu_lawler_greedy(&bad, TieBreak::LeastId), Err(Error::Input(_))));
    }
}
