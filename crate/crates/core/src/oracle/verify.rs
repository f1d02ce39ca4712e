use crate::element::{ElementSet, GroundSet};
use crate::error::{Error, Result};
use crate::exchange::ExchangeInstance;
use crate::graph::Graph;
use crate::graph_apps::{coverage_misses, PathSystem, SmWitness};
use crate::matroid::MatroidExpr;
use crate::partition::{FamilyCbInstance, FamilyInstance};

use super::Verdict;

/// Largest ground set [`is_strongly_maximal_bruteforce`] will search.
pub const SM_LIMIT: usize = 16;

/// How witnesses print element sets: by label when a ground set is known.
#[derive(Clone, Copy, Default)]
pub struct Names<'a>(pub Option<&'a GroundSet>);

impl Names<'_> {
    pub fn set(&self, x: &ElementSet) -> String {
        match self.0 {
            Some(g) => format!("{{{}}}", g.format_set(x)),
            None => format!("{x:?}"),
        }
    }
}

fn require_spans(v: &mut Verdict, cond: &str, m: &MatroidExpr, by: &ElementSet, target: &ElementSet, names: Names, what: &str) {
    let missing: ElementSet = target.iter().filter(|&e| !m.spans_element(by, e)).collect();
    v.require(cond, missing.is_empty(), || format!("{} not spanned {what}", names.set(&missing)));
}

/// `I` is common independent, `I0 ⊆ span_M0(I)` and `I1 ⊆ span_M1(I)`.
pub fn verify_kl(inst: &ExchangeInstance, i: &ElementSet, names: Names) -> Verdict {
    let mut v = Verdict::new();
    if !i.is_subset(inst.ground()) {
        v.push("ground", format!("{} is outside E", names.set(&i.difference(inst.ground()))));
        return v;
    }
    v.require("independent-M0", inst.m0.independent(i), || format!("{} is dependent in M0", names.set(i)));
    v.require("independent-M1", inst.m1.independent(i), || format!("{} is dependent in M1", names.set(i)));
    require_spans(&mut v, "span-I0-M0", &inst.m0, i, &inst.i0, names, "in M0");
    require_spans(&mut v, "span-I1-M1", &inst.m1, i, &inst.i1, names, "in M1");
    v
}

fn check_partition(v: &mut Verdict, ground: &ElementSet, t: &[ElementSet], names: Names) {
    for (i, a) in t.iter().enumerate() {
        v.require("ground", a.is_subset(ground), || format!("T_{i} leaves E"));
        for (j, b) in t.iter().enumerate().skip(i + 1) {
            let both = a.intersection(b);
            v.require("disjoint", both.is_empty(), || format!("T_{i} ∩ T_{j} = {}", names.set(&both)));
        }
    }
    let covered = t.iter().fold(ElementSet::new(), |a, x| a.union(x));
    let missing = ground.difference(&covered);
    v.require("cover", missing.is_empty(), || format!("{} lies in no T_i", names.set(&missing)));
}

/// The packing/covering conclusions: the `T_i` partition `E`, and for each
/// `i`, `T_i ⊆ P_i ∪ R_i`, `P_i ⊆ span_{M_i}(T_i)` and
/// `E \ R_i ⊆ span_{M_i*}(E \ T_i)`.
pub fn verify_partition(inst: &FamilyInstance, t: &[ElementSet], names: Names) -> Verdict {
    let mut v = Verdict::new();
    if t.len() != inst.members.len() {
        v.push("shape", format!("{} sets for {} indices", t.len(), inst.members.len()));
        return v;
    }
    check_partition(&mut v, &inst.ground, t, names);
    for (i, (m, ti)) in inst.members.iter().zip(t).enumerate() {
        let allowed = m.packing.union(&m.covering);
        v.require("within-P-R", ti.is_subset(&allowed), || {
            format!("T_{i} contains {} outside P_{i} ∪ R_{i}", names.set(&ti.difference(&allowed)))
        });
        require_spans(&mut v, "span", &m.matroid, ti, &m.packing, names, &format!("by T_{i} in M_{i}"));
        let rest = inst.ground.difference(ti);
        let target = inst.ground.difference(&m.covering);
        require_spans(&mut v, "dual-span", &m.matroid.dual(), &rest, &target, names, &format!("by E \\ T_{i} in M_{i}*"));
    }
    v
}

/// The four conclusions for an arbitrary pair of sets: `F_i ⊆ span_{M_i}(F)`
/// and `E \ F_{1-i} ⊆ span_{M_i*}(E \ F)` for both `i`.
pub fn verify_sets(m0: &MatroidExpr, m1: &MatroidExpr, f0: &ElementSet, f1: &ElementSet, f: &ElementSet, names: Names) -> Verdict {
    let mut v = Verdict::new();
    let e = m0.ground();
    if !f.is_subset(e) {
        v.push("ground", format!("{} is outside E", names.set(&f.difference(e))));
        return v;
    }
    let rest = e.difference(f);
    require_spans(&mut v, "span-F0-M0", m0, f, f0, names, "by F in M0");
    require_spans(&mut v, "span-F1-M1", m1, f, f1, names, "by F in M1");
    require_spans(&mut v, "dual-span-M0", &m0.dual(), &rest, &e.difference(f1), names, "by E \\ F in M0*");
    require_spans(&mut v, "dual-span-M1", &m1.dual(), &rest, &e.difference(f0), names, "by E \\ F in M1*");
    v
}

/// The per-element variant's conclusions, with `T_i ⊆ P_i ∪ R_i`.
pub fn verify_family_cb(inst: &FamilyCbInstance, t: &[ElementSet], names: Names) -> Verdict {
    let mut v = Verdict::new();
    let theta = inst.members.len();
    if t.len() != theta {
        v.push("shape", format!("{} sets for {theta} indices", t.len()));
        return v;
    }
    for (i, (m, ti)) in inst.members.iter().zip(t).enumerate() {
        let allowed = m.packing.union(&m.covering);
        v.require("within-P-R", ti.is_subset(&allowed), || {
            format!("T_{i} contains {} outside P_{i} ∪ R_{i}", names.set(&ti.difference(&allowed)))
        });
        require_spans(&mut v, "1-span", &m.matroid, ti, &m.packing, names, &format!("by T_{i} in M_{i}"));
        let rest = inst.ground.difference(ti);
        let target = inst.ground.difference(&m.covering);
        require_spans(&mut v, "2-dual-span", &m.matroid.dual(), &rest, &target, names, &format!("by E \\ T_{i} in M_{i}*"));
    }
    for (e, n) in inst.ground.iter().zip(&inst.index_matroids) {
        let indices = |pred: &dyn Fn(usize) -> bool| -> ElementSet {
            (0..theta).filter(|&i| pred(i)).map(crate::element::Element).collect()
        };
        let in_t = indices(&|i| t[i].contains(e));
        let in_r = indices(&|i| inst.members[i].covering.contains(e));
        let out_t = indices(&|i| !t[i].contains(e));
        let out_p = indices(&|i| !inst.members[i].packing.contains(e));
        v.require("3-index-span", n.spans_all(&in_t, &in_r), || {
            format!("for {}: {in_t:?} does not span {in_r:?} in N_e", names.set(&ElementSet::singleton(e)))
        });
        v.require("4-index-dual-span", n.dual().spans_all(&out_t, &out_p), || {
            format!("for {}: {out_t:?} does not span {out_p:?} in N_e*", names.set(&ElementSet::singleton(e)))
        });
    }
    v
}

/// Validity of the merged system and `V(𝒫) ∩ V_i ⊇ V(𝒫_i) ∩ V_i`.
pub fn verify_paths(g: &Graph, p0: &PathSystem, p1: &PathSystem, out: &PathSystem) -> Verdict {
    let mut v = Verdict::new();
    for msg in out.violations(g) {
        let cond = msg.split(':').next().unwrap_or("path").to_string();
        v.push(cond, msg);
    }
    for (i, x) in coverage_misses(g, out, [p0, p1]) {
        v.push(format!("coverage-V{i}"), format!("{} is a V{i}-vertex of P{i} missing from the output", g.vertex_label(x)));
    }
    v
}

/// Searches every partition `E = E0 ⊔ E1` for one with `I ∩ E_i` spanning
/// `E_i` in `M_i`. Returns the first in the order of `E0` as a bitmask
/// over the ground set.
pub fn is_strongly_maximal_bruteforce(m0: &MatroidExpr, m1: &MatroidExpr, i: &ElementSet) -> Result<(Verdict, Option<SmWitness>)> {
    let ground = m0.ground();
    if ground != m1.ground() {
        return Err(Error::input("M0 and M1 have different ground sets"));
    }
    if ground.len() > SM_LIMIT {
        return Err(Error::TooLarge {
            size: ground.len(),
            limit: SM_LIMIT,
        });
    }
    let mut v = Verdict::new();
    v.require("common-independent", i.is_subset(ground) && m0.independent(i) && m1.independent(i), || {
        format!("{i:?} is not common independent")
    });
    if !v.pass {
        return Ok((v, None));
    }
    for e0 in ground.subsets() {
        let e1 = ground.difference(&e0);
        if m0.spans_all(&i.intersection(&e0), &e0) && m1.spans_all(&i.intersection(&e1), &e1) {
            let w = SmWitness { set: i.clone(), e0, e1 };
            return Ok((v, Some(w)));
        }
    }
    v.push("strongly-maximal", format!("no partition of E works for {i:?}"));
    Ok((v, None))
}
