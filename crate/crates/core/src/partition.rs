//! Packing/covering partitions.
//!
//! Given matroids `M_i` on a common ground set `E`, a packing `(P_i)` and a
//! covering `(R_i)`, [`solve_family`] finds a partition `(T_i)` of `E` with
//! `T_i ⊆ P_i ∪ R_i`, `P_i ⊆ span_{M_i}(T_i)` and
//! `E \ R_i ⊆ span_{M_i*}(E \ T_i)`.
//!
//! The recursion starts from `T_i = P_i` and applies one successor rule at
//! a time:
//!
//! * (a) if some `T_j` holds an `M_j`-circuit not inside `R_j`, drop an
//!   element of `P_j` from that circuit;
//! * (b) otherwise take an uncovered `e` and its owner `k` (`e ∈ R_k`); if
//!   `M_k` is in cofinitary mode, or `T_k + e` creates no circuit leaving
//!   `R_k`, add `e` to `T_k`;
//! * (c) otherwise swap `e` in and the `<_k`-maximal element of such a
//!   circuit out, where `<_k` puts `R_k` before everything else.
//!
//! Every rule shrinks some `T_i ∩ P_i` or grows some `T_i ∩ R_i`, so the
//! potential `Σ|T_i ∩ R_i| - Σ|T_i ∩ P_i|` strictly increases and the run
//! stops after at most `2|E|` steps.
//!
//! [`cantor_bernstein_sets`] and [`family_cb`] derive the two-set and the
//! per-element-matroid variants from the same recursion.

use std::collections::{BTreeMap, HashSet};

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::exchange::least_spanning_witness;
use crate::matroid::{circuit_from_set, Circuit, MatroidExpr, Mode};
use crate::order::{ElementOrder, SubsetOrder};

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub matroid: MatroidExpr,
    pub packing: ElementSet,
    pub covering: ElementSet,
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub ground: ElementSet,
    pub members: Vec<FamilyMember>,
}

impl FamilyInstance {
    pub fn new(ground: ElementSet, members: Vec<FamilyMember>) -> Self {
        Self { ground, members }
    }

    fn check_shapes(&self) -> Result<()> {
        for (i, m) in self.members.iter().enumerate() {
            if m.matroid.ground() != &self.ground {
                return Err(Error::input(format!("M_{i} is not on the shared ground set")));
            }
            if !m.packing.is_subset(&self.ground) || !m.covering.is_subset(&self.ground) {
                return Err(Error::input(format!("P_{i} or R_{i} leaves the ground set")));
            }
        }
        Ok(())
    }

    /// Packing/covering hypothesis: the `P_i` are pairwise disjoint and the
    /// `R_i` cover the ground set.
    pub fn validate(&self) -> Result<()> {
        self.check_shapes()?;
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate().skip(i + 1) {
                if !a.packing.is_disjoint(&b.packing) {
                    return Err(Error::input(format!(
                        "P_{i} and P_{j} intersect in {:?}",
                        a.packing.intersection(&b.packing)
                    )));
                }
            }
        }
        let covered = self
            .members
            .iter()
            .fold(ElementSet::new(), |acc, m| acc.union(&m.covering));
        if covered != self.ground {
            return Err(Error::input(format!(
                "the R_i do not cover {:?}",
                self.ground.difference(&covered)
            )));
        }
        Ok(())
    }

    /// The stronger shape the recursion itself needs: `R_i` a partition,
    /// `P_i` independent and disjoint from `R_i`.
    pub fn validate_preprocessed(&self) -> Result<()> {
        self.validate()?;
        let mut seen = ElementSet::new();
        for (i, m) in self.members.iter().enumerate() {
            if !m.covering.is_disjoint(&seen) {
                return Err(Error::contract(format!("R_{i} overlaps an earlier R_j")));
            }
            seen = seen.union(&m.covering);
            if !m.matroid.independent(&m.packing) {
                return Err(Error::contract(format!("P_{i} is dependent in M_{i}")));
            }
            if !m.packing.is_disjoint(&m.covering) {
                return Err(Error::contract(format!("P_{i} meets R_{i}")));
            }
        }
        Ok(())
    }
}

/// Maps a partition of a preprocessed instance back to the raw one.
#[derive(Clone, Debug)]
pub struct PreprocessLift {
    /// Original index of each preprocessed member.
    origin: Vec<usize>,
    /// Per preprocessed member, the contracted elements `P_i ∩ R_i`.
    restored: Vec<ElementSet>,
    original_len: usize,
}

impl PreprocessLift {
    pub fn lift(&self, sets: &[ElementSet]) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::new(); self.original_len];
        for (k, t) in sets.iter().enumerate() {
            let i = self.origin[k];
            out[i] = out[i].union(t).union(&self.restored[k]);
        }
        out
    }
}

/// Normalises a raw instance: trims the `R_i` to a partition (each element
/// goes to the least index covering it), shrinks each `P_i` to a maximal
/// independent subset, splits a direct sum mixing both modes into a
/// finitary and a cofinitary member (each extended by loops), and removes
/// `P_i ∩ R_i` by contracting it in `M_i` and deleting it elsewhere.
pub fn preprocess(raw: &FamilyInstance) -> Result<(FamilyInstance, PreprocessLift)> {
    raw.validate()?;

    let mut assigned = ElementSet::new();
    let mut members = Vec::new();
    let mut origin = Vec::new();
    for (i, m) in raw.members.iter().enumerate() {
        let covering = m.covering.difference(&assigned);
        assigned = assigned.union(&covering);
        let packing = m.matroid.maximal_independent_subset(&m.packing);
        match m.matroid.mode_parts() {
            Some((fin, cofin)) => {
                for part in [fin, cofin] {
                    let mode = part.declared_mode();
                    let pg = part.ground().clone();
                    members.push(FamilyMember {
                        matroid: part.extend_by_loops(&raw.ground).with_mode(mode),
                        packing: packing.intersection(&pg),
                        covering: covering.intersection(&pg),
                    });
                    origin.push(i);
                }
            }
            None => {
                members.push(FamilyMember {
                    matroid: m.matroid.clone(),
                    packing,
                    covering,
                });
                origin.push(i);
            }
        }
    }

    let overlaps: Vec<ElementSet> = members
        .iter()
        .map(|m| m.packing.intersection(&m.covering))
        .collect();
    let all_overlap = overlaps.iter().fold(ElementSet::new(), |a, q| a.union(q));
    let ground = raw.ground.difference(&all_overlap);
    let members = members
        .into_iter()
        .zip(&overlaps)
        .map(|(m, q)| -> Result<FamilyMember> {
            let mode = m.matroid.declared_mode();
            let mut matroid = m.matroid.contract(q)?.delete(&all_overlap.difference(q))?;
            if !q.is_empty() || !all_overlap.is_empty() {
                matroid = matroid.with_mode(mode);
            }
            Ok(FamilyMember {
                matroid,
                packing: m.packing.difference(q),
                covering: m.covering.difference(q),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let lift = PreprocessLift {
        origin,
        restored: overlaps,
        original_len: raw.members.len(),
    };
    Ok((FamilyInstance { ground, members }, lift))
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionOptions {
    /// Re-verify the loop conditions after every step.
    pub check_invariants: bool,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            check_invariants: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionStep {
    /// Rule (a).
    Remove { index: usize, element: Element },
    /// Rule (b).
    Add { index: usize, element: Element },
    /// Rule (c).
    Exchange {
        index: usize,
        entering: Element,
        leaving: Element,
        circuit: Circuit,
    },
}

#[derive(Clone, Debug)]
pub struct PartitionOutcome {
    pub sets: Vec<ElementSet>,
    pub steps: Vec<PartitionStep>,
    /// `Σ|T_i ∩ R_i| - Σ|T_i ∩ P_i|` before the first step and after each.
    pub potentials: Vec<i64>,
}

struct Run<'a> {
    inst: &'a FamilyInstance,
    modes: Vec<Mode>,
    orders: Vec<SubsetOrder>,
    owner: BTreeMap<Element, usize>,
    t: Vec<ElementSet>,
    witnesses: BTreeMap<(usize, Element), ElementSet>,
    history: HashSet<Vec<ElementSet>>,
    outcome: PartitionOutcome,
}

impl Run<'_> {
    fn potential(&self) -> i64 {
        self.inst
            .members
            .iter()
            .zip(&self.t)
            .map(|(m, t)| t.intersection(&m.covering).len() as i64 - t.intersection(&m.packing).len() as i64)
            .sum()
    }

    fn fail(&self, msg: String) -> Error {
        Error::internal(format!(
            "{msg}\nstate: {:?}\nsteps: {:#?}",
            self.t, self.outcome.steps
        ))
    }

    /// Elements of `P_i ∩ x` lying on some `M_i`-circuit inside `x`. Such a
    /// circuit leaves `R_i`, and every circuit leaving `R_i` has one.
    fn bad_elements(&self, i: usize, x: &ElementSet) -> ElementSet {
        let m = &self.inst.members[i];
        x.intersection(&m.packing)
            .iter()
            .filter(|&p| m.matroid.spans_element(&x.without(p), p))
            .collect()
    }

    fn has_bad_circuit(&self, i: usize, x: &ElementSet) -> bool {
        !self.bad_elements(i, x).is_empty()
    }

    /// Dual-span form of "every circuit in `T_i` lies in `R_i`".
    fn dual_condition_holds(&self, i: usize) -> bool {
        let m = &self.inst.members[i];
        let complement = self.inst.ground.difference(&self.t[i]);
        m.matroid
            .dual()
            .spans_all(&complement, &self.inst.ground.difference(&m.covering))
    }

    fn witness(&self, i: usize, g: Element) -> Result<ElementSet> {
        let m = &self.inst.members[i];
        least_spanning_witness(&m.matroid, &self.orders[i], &self.t[i], g)
    }

    fn init_witnesses(&mut self) -> Result<()> {
        for i in 0..self.t.len() {
            if self.modes[i] == Mode::Finitary {
                for g in self.inst.members[i].packing.iter() {
                    let s = self.witness(i, g)?;
                    self.witnesses.insert((i, g), s);
                }
            }
        }
        Ok(())
    }

    fn covered(&self) -> ElementSet {
        self.t.iter().fold(ElementSet::new(), |a, t| a.union(t))
    }

    fn next_step(&self) -> Result<Option<PartitionStep>> {
        let uncovered = self.inst.ground.difference(&self.covered());
        let done = uncovered.is_empty()
            && (0..self.t.len())
                .filter(|&i| self.modes[i] == Mode::Cofinitary)
                .all(|i| self.dual_condition_holds(i));
        if done {
            return Ok(None);
        }
        for j in 0..self.t.len() {
            if let Some(p) = self.bad_elements(j, &self.t[j]).first() {
                return Ok(Some(PartitionStep::Remove { index: j, element: p }));
            }
        }
        let Some(e) = uncovered.first() else {
            return Err(self.fail(
                "E is covered and no circuit leaves its R_i, yet a dual-span condition fails".into(),
            ));
        };
        let k = self.owner[&e];
        let grown = self.t[k].with(e);
        if self.modes[k] == Mode::Cofinitary || !self.has_bad_circuit(k, &grown) {
            return Ok(Some(PartitionStep::Add { index: k, element: e }));
        }
        let circuit = self.orders[k].least_accepted(&grown, |s| self.has_bad_circuit(k, s))?;
        let matroid = &self.inst.members[k].matroid;
        if !matroid.is_circuit(&circuit) || !circuit.contains(e) {
            return Err(self.fail(format!("exchange circuit search returned {circuit:?}")));
        }
        let f = self.orders[k].base().max_element(&circuit)?;
        if !self.inst.members[k].packing.contains(f) {
            return Err(self.fail(format!("leaving element {f} is not in P_{k}")));
        }
        Ok(Some(PartitionStep::Exchange {
            index: k,
            entering: e,
            leaving: f,
            circuit: circuit_from_set(circuit),
        }))
    }

    fn apply(&mut self, step: &PartitionStep) {
        match *step {
            PartitionStep::Remove { index, element } => {
                self.t[index].remove(element);
            }
            PartitionStep::Add { index, element } => {
                self.t[index].insert(element);
            }
            PartitionStep::Exchange {
                index,
                entering,
                leaving,
                ..
            } => {
                self.t[index].insert(entering);
                self.t[index].remove(leaving);
            }
        }
    }

    fn check_conditions(&mut self, prev: &[ElementSet], changed: usize, check_all: bool) -> Result<()> {
        let inst = self.inst;
        if check_all {
            for i in 0..self.t.len() {
                for j in i + 1..self.t.len() {
                    if !self.t[i].is_disjoint(&self.t[j]) {
                        return Err(self.fail(format!("T_{i} and T_{j} intersect")));
                    }
                }
            }
        }
        let indices: Vec<usize> = if check_all { (0..self.t.len()).collect() } else { vec![changed] };
        for i in indices {
            let m = &inst.members[i];
            let t = &self.t[i];
            if !t.is_subset(&m.packing.union(&m.covering)) {
                return Err(self.fail(format!("T_{i} leaves P_{i} ∪ R_{i}")));
            }
            if !t.intersection(&m.packing).is_subset(&prev[i].intersection(&m.packing))
                || !prev[i].intersection(&m.covering).is_subset(&t.intersection(&m.covering))
            {
                return Err(self.fail(format!("T_{i} ∩ P_{i} grew or T_{i} ∩ R_{i} shrank")));
            }
            if !m.matroid.spans_all(t, &m.packing) {
                return Err(self.fail(format!("T_{i} no longer spans P_{i}")));
            }
            if self.modes[i] == Mode::Finitary {
                if self.has_bad_circuit(i, t) {
                    return Err(self.fail(format!("finitary T_{i} holds a circuit leaving R_{i}")));
                }
                for g in m.packing.iter() {
                    let new = self.witness(i, g)?;
                    let old = &self.witnesses[&(i, g)];
                    if self.orders[i].precedes(old, &new)? {
                        return Err(self.fail(format!("witness of {g} in T_{i} increased: {old:?} -> {new:?}")));
                    }
                    self.witnesses.insert((i, g), new);
                }
            }
        }
        Ok(())
    }
}

/// Runs the successor recursion on a preprocessed instance.
pub fn partition_family(inst: &FamilyInstance, opts: PartitionOptions) -> Result<PartitionOutcome> {
    inst.validate_preprocessed()?;
    let mut owner = BTreeMap::new();
    for (i, m) in inst.members.iter().enumerate() {
        for e in m.covering.iter() {
            owner.insert(e, i);
        }
    }
    let orders = inst
        .members
        .iter()
        .map(|m| ElementOrder::with_initial_segment(&inst.ground, &m.covering).map(SubsetOrder::new))
        .collect::<Result<Vec<_>>>()?;
    let t: Vec<ElementSet> = inst.members.iter().map(|m| m.packing.clone()).collect();
    let mut run = Run {
        inst,
        modes: inst.members.iter().map(|m| m.matroid.declared_mode()).collect(),
        orders,
        owner,
        history: HashSet::from([t.clone()]),
        t,
        witnesses: BTreeMap::new(),
        outcome: PartitionOutcome {
            sets: Vec::new(),
            steps: Vec::new(),
            potentials: Vec::new(),
        },
    };
    run.init_witnesses()?;
    run.outcome.potentials.push(run.potential());
    let limit = 2 * inst.ground.len() * inst.members.len().max(1);

    while let Some(step) = run.next_step()? {
        if run.outcome.steps.len() >= limit {
            return Err(run.fail(format!("no termination within {limit} steps")));
        }
        let prev = run.t.clone();
        run.apply(&step);
        let changed = match step {
            PartitionStep::Remove { index, .. }
            | PartitionStep::Add { index, .. }
            | PartitionStep::Exchange { index, .. } => index,
        };
        run.outcome.steps.push(step);
        let p = run.potential();
        if p <= *run.outcome.potentials.last().expect("seeded") {
            return Err(run.fail("potential did not increase".into()));
        }
        run.outcome.potentials.push(p);
        if !run.history.insert(run.t.clone()) {
            return Err(run.fail("state repeated".into()));
        }
        if opts.check_invariants {
            run.check_conditions(&prev, changed, false)?;
        }
    }
    if opts.check_invariants {
        let current = run.t.clone();
        run.check_conditions(&current, 0, true)?;
        for i in 0..run.t.len() {
            if !run.dual_condition_holds(i) {
                return Err(run.fail(format!("final T_{i} fails the dual-span condition")));
            }
        }
        if run.covered() != inst.ground {
            return Err(run.fail("final sets do not cover E".into()));
        }
    }
    run.outcome.sets = run.t;
    Ok(run.outcome)
}

#[derive(Clone, Debug)]
pub struct FamilyPartition {
    /// The partition of the original ground set.
    pub sets: Vec<ElementSet>,
    /// The recursion as run on the preprocessed instance.
    pub run: PartitionOutcome,
    pub preprocessed: FamilyInstance,
}

/// Preprocesses, runs the recursion and lifts the result.
pub fn solve_family(raw: &FamilyInstance, opts: PartitionOptions) -> Result<FamilyPartition> {
    let (pre, lift) = preprocess(raw)?;
    let run = partition_family(&pre, opts)?;
    Ok(FamilyPartition {
        sets: lift.lift(&run.sets),
        run,
        preprocessed: pre,
    })
}

/// For arbitrary `F0`, `F1 ⊆ E`, a set `F` with `F_i ⊆ span_{M_i}(F)` and
/// `E \ F_{1-i} ⊆ span_{M_i*}(E \ F)` for both `i`.
///
/// Contracts `F0 ∩ F1`, deletes `E \ (F0 ∪ F1)`, and partitions the rest
/// with the pair `M0`, `M1*`, packings `F0`, `F1` and coverings `F1`, `F0`.
pub fn cantor_bernstein_sets(m0: &MatroidExpr, m1: &MatroidExpr, f0: &ElementSet, f1: &ElementSet) -> Result<ElementSet> {
    if m0.ground() != m1.ground() {
        return Err(Error::input("M0 and M1 have different ground sets"));
    }
    if !f0.is_subset(m0.ground()) || !f1.is_subset(m0.ground()) {
        return Err(Error::input("F0 and F1 must be subsets of the ground set"));
    }
    let common = f0.intersection(f1);
    let outside = m0.ground().difference(&f0.union(f1));
    let m0r = m0.contract(&common)?.delete(&outside)?;
    let m1r = m1.contract(&common)?.delete(&outside)?;
    let (a, b) = (f0.difference(&common), f1.difference(&common));
    let inst = FamilyInstance::new(
        a.union(&b),
        vec![
            FamilyMember {
                matroid: m0r,
                packing: a.clone(),
                covering: b.clone(),
            },
            FamilyMember {
                matroid: m1r.dual(),
                packing: b,
                covering: a,
            },
        ],
    );
    let out = solve_family(&inst, PartitionOptions::default())?;
    Ok(out.sets[0].union(&common))
}

/// Input of the per-element variant: besides `(M_i, P_i, R_i)` for
/// `i ∈ Θ = {0, .., |Θ|-1}`, a matroid `N_e` on `Θ` for every `e ∈ E`.
/// Each `N_e` uses the elements `0..|Θ|` as the indices.
#[derive(Clone, Debug)]
pub struct FamilyCbInstance {
    pub ground: ElementSet,
    pub members: Vec<FamilyMember>,
    /// `N_e`, aligned with `ground` in id order.
    pub index_matroids: Vec<MatroidExpr>,
}

impl FamilyCbInstance {
    pub fn validate(&self) -> Result<()> {
        let theta = ElementSet::full(self.members.len());
        for (i, m) in self.members.iter().enumerate() {
            if m.matroid.ground() != &self.ground {
                return Err(Error::input(format!("M_{i} is not on the shared ground set")));
            }
            if !m.packing.is_subset(&self.ground) || !m.covering.is_subset(&self.ground) {
                return Err(Error::input(format!("P_{i} or R_{i} leaves the ground set")));
            }
        }
        if self.index_matroids.len() != self.ground.len() {
            return Err(Error::input(format!(
                "{} index matroids for {} elements",
                self.index_matroids.len(),
                self.ground.len()
            )));
        }
        for (e, n) in self.ground.iter().zip(&self.index_matroids) {
            if n.ground() != &theta {
                return Err(Error::input(format!("N_{e} is not on the index set")));
            }
        }
        Ok(())
    }

    pub fn index_matroid(&self, e: Element) -> Option<&MatroidExpr> {
        self.ground
            .iter()
            .position(|x| x == e)
            .map(|p| &self.index_matroids[p])
    }
}

/// Per-element variant: `T_i ⊆ P_i ∪ R_i` with `P_i ⊆ span_{M_i}(T_i)`,
/// `E \ R_i ⊆ span_{M_i*}(E \ T_i)`, and for every `e`, `{i : e ∈ T_i}`
/// spans `{i : e ∈ R_i}` in `N_e` while `{i : e ∉ T_i}` spans
/// `{i : e ∉ P_i}` in `N_e*`.
///
/// Copies each `M_i` onto `{i} × E` and each `N_e*` onto `Θ × {e}`, extends
/// all of them by loops to `Θ × E`, and runs the recursion there with
/// coverings `{i} × R_i`, `{i : e ∉ R_i} × {e}` and packings `{i} × P_i`,
/// `{i : e ∉ P_i} × {e}`.
pub fn family_cb(inst: &FamilyCbInstance) -> Result<Vec<ElementSet>> {
    inst.validate()?;
    let theta = inst.members.len();
    let elems: Vec<Element> = inst.ground.iter().collect();
    let n = elems.len();
    let pos: BTreeMap<Element, usize> = elems.iter().enumerate().map(|(p, &e)| (e, p)).collect();
    let product = ElementSet::full(theta * n);
    let at = |i: usize, p: usize| Element(i * n + p);

    // Elements mentioned only inside minors get ids past the product block.
    let span_of = |m: &MatroidExpr| m.support().iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let stride = inst
        .members
        .iter()
        .map(|m| span_of(&m.matroid))
        .chain(inst.index_matroids.iter().map(span_of))
        .max()
        .unwrap_or(0)
        .max(1);
    let spare = |slot: usize, e: Element| Element(theta * n + slot * stride + e.0);

    let mut members = Vec::with_capacity(theta + n);
    for (i, m) in inst.members.iter().enumerate() {
        let copy = m
            .matroid
            .map_elements(&|e| pos.get(&e).map_or_else(|| spare(i, e), |&p| at(i, p)));
        let lift = |s: &ElementSet| s.iter().map(|e| at(i, pos[&e])).collect::<ElementSet>();
        members.push(FamilyMember {
            matroid: copy.extend_by_loops(&product),
            packing: lift(&m.packing),
            covering: lift(&m.covering),
        });
    }
    for (p, (&e, ne)) in elems.iter().zip(&inst.index_matroids).enumerate() {
        let copy = ne.dual().map_elements(&|x| {
            if x.0 < theta {
                at(x.0, p)
            } else {
                spare(theta + p, x)
            }
        });
        let missing = |pick: &dyn Fn(&FamilyMember) -> &ElementSet| -> ElementSet {
            (0..theta)
                .filter(|&i| !pick(&inst.members[i]).contains(e))
                .map(|i| at(i, p))
                .collect()
        };
        members.push(FamilyMember {
            matroid: copy.extend_by_loops(&product),
            packing: missing(&|m| &m.packing),
            covering: missing(&|m| &m.covering),
        });
    }
    let lifted = FamilyInstance::new(product, members);
    let out = solve_family(&lifted, PartitionOptions::default())?;
    Ok((0..theta)
        .map(|i| {
            out.sets[i]
                .iter()
                .map(|x| elems[x.0 - i * n])
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Graph;

    fn member(m: MatroidExpr, p: ElementSet, r: ElementSet) -> FamilyMember {
        FamilyMember {
            matroid: m,
            packing: p,
            covering: r,
        }
    }

    #[test]
    fn single_free_member_takes_everything() {
        let e = ElementSet::from([0, 1, 2]);
        let inst = FamilyInstance::new(e.clone(), vec![member(MatroidExpr::free(e.clone()), ElementSet::new(), e.clone())]);
        let out = solve_family(&inst, PartitionOptions::default()).unwrap();
        assert_eq!(out.sets, vec![e]);
        assert_eq!(out.run.steps.len(), 3);
        assert!(out.run.steps.iter().all(|s| matches!(s, PartitionStep::Add { index: 0, .. })));
    }

    #[test]
    fn clean_instance_is_unchanged_by_preprocessing() {
        let e = ElementSet::from([0, 1]);
        let inst = FamilyInstance::new(
            e.clone(),
            vec![
                member(MatroidExpr::free(e.clone()), ElementSet::from([0]), ElementSet::from([1])),
                member(MatroidExpr::free(e.clone()), ElementSet::from([1]), ElementSet::from([0])),
            ],
        );
        let (pre, lift) = preprocess(&inst).unwrap();
        assert_eq!(pre.ground, inst.ground);
        for (a, b) in pre.members.iter().zip(&inst.members) {
            assert_eq!(a.packing, b.packing);
            assert_eq!(a.covering, b.covering);
        }
        let sets = vec![ElementSet::from([0]), ElementSet::from([1])];
        assert_eq!(lift.lift(&sets), sets);
    }

    #[test]
    fn dependent_packing_is_shrunk() {
        let e = ElementSet::from([0, 1, 2]);
        let u = MatroidExpr::uniform(1, e.clone());
        let inst = FamilyInstance::new(e.clone(), vec![member(u, ElementSet::from([0, 1]), e.clone())]);
        let (pre, _) = preprocess(&inst).unwrap();
        // P ∩ R = P after shrinking, so the single kept element is contracted away.
        assert_eq!(pre.ground.len(), 2);
        let out = solve_family(&inst, PartitionOptions::default()).unwrap();
        assert_eq!(out.sets, vec![e]);
    }

    #[test]
    fn overlapping_coverings_are_trimmed() {
        let e = ElementSet::from([0, 1, 2]);
        let inst = FamilyInstance::new(
            e.clone(),
            vec![
                member(MatroidExpr::free(e.clone()), ElementSet::new(), ElementSet::from([0, 1])),
                member(MatroidExpr::free(e.clone()), ElementSet::new(), ElementSet::from([1, 2])),
            ],
        );
        let (pre, _) = preprocess(&inst).unwrap();
        assert_eq!(pre.members[1].covering, ElementSet::from([2]));
        pre.validate_preprocessed().unwrap();
    }

    #[test]
    fn hypothesis_violations_name_the_pair() {
        let e = ElementSet::from([0, 1]);
        let bad = FamilyInstance::new(
            e.clone(),
            vec![
                member(MatroidExpr::free(e.clone()), ElementSet::from([0]), e.clone()),
                member(MatroidExpr::free(e.clone()), ElementSet::from([0]), e.clone()),
            ],
        );
        let err = preprocess(&bad).unwrap_err().to_string();
        assert!(err.contains("P_0 and P_1"), "{err}");
        let uncovered = FamilyInstance::new(e.clone(), vec![member(MatroidExpr::free(e), ElementSet::new(), ElementSet::from([0]))]);
        assert!(matches!(preprocess(&uncovered), Err(Error::Input(_))));
    }

    #[test]
    fn swapped_packings_on_two_free_matroids() {
        let e = ElementSet::from([0, 1]);
        let inst = FamilyInstance::new(
            e.clone(),
            vec![
                member(MatroidExpr::free(e.clone()), ElementSet::from([0]), ElementSet::from([1])),
                member(MatroidExpr::free(e.clone()), ElementSet::from([1]), ElementSet::from([0])),
            ],
        );
        let out = solve_family(&inst, PartitionOptions::default()).unwrap();
        // Free matroids only span their own members, so T_i must keep P_i.
        assert_eq!(out.sets, vec![ElementSet::from([0]), ElementSet::from([1])]);
        assert!(out.run.steps.is_empty());
    }

    #[test]
    fn two_spanning_trees_of_k4() {
        let mut g = Graph::new(4);
        let mut id = 0;
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(Element(id), u, v).unwrap();
                id += 1;
            }
        }
        // Edges: 0=01 1=02 2=03 3=12 4=13 5=23.
        let m = MatroidExpr::graphic(Arc::new(g), vec![]).unwrap();
        let t0 = ElementSet::from([0, 3, 5]); // path 0-1-2-3
        let t1 = ElementSet::from([1, 2, 4]); // 2-0-3-1
        let e = ElementSet::full(6);
        let inst = FamilyInstance::new(
            e.clone(),
            vec![member(m.clone(), t0.clone(), t0.clone()), member(m.clone(), t1.clone(), t1.clone())],
        );
        let out = solve_family(&inst, PartitionOptions::default()).unwrap();
        assert_eq!(out.sets[0].union(&out.sets[1]), e);
        assert!(out.sets[0].is_disjoint(&out.sets[1]));
        assert!(m.spans_all(&out.sets[0], &t0));
        assert!(m.spans_all(&out.sets[1], &t1));
    }

    #[test]
    fn cantor_bernstein_small_cases() {
        let e = ElementSet::from([0]);
        let free = MatroidExpr::free(e.clone());
        let f = cantor_bernstein_sets(&free, &free, &e, &ElementSet::new()).unwrap();
        assert_eq!(f, e);
        let f = cantor_bernstein_sets(&free, &free, &ElementSet::new(), &ElementSet::new()).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn family_cb_with_uniform_index_matroids() {
        let e = ElementSet::from([0, 1]);
        let theta = ElementSet::full(2);
        let inst = FamilyCbInstance {
            ground: e.clone(),
            members: vec![
                member(MatroidExpr::free(e.clone()), ElementSet::new(), e.clone()),
                member(MatroidExpr::free(e.clone()), ElementSet::new(), e.clone()),
            ],
            index_matroids: vec![MatroidExpr::uniform(1, theta.clone()), MatroidExpr::uniform(1, theta)],
        };
        let t = family_cb(&inst).unwrap();
        for x in e.iter() {
            assert!(t.iter().any(|ti| ti.contains(x)), "{x} is in no T_i");
        }
    }
}
