//! Path merging, matchings and strongly maximal sets against validators
//! and exhaustive enumeration written here.

use std::collections::BTreeSet;
use std::sync::Arc;

use matroid_cb::graph_apps::{
    bipartite_partition_matroids, contracted_cycle_matroid, dominates, max_common_independent, merge_path_systems, ore_matching,
    strongly_maximal_above, ExchangeVariant, Path, PathSystem, SmRoute,
};
use matroid_cb::exchange::TieBreak;
use matroid_cb::oracle::gen::{self, InstanceSeed, Mix, Shape};
use matroid_cb::{Element, ElementSet, Graph, MatroidExpr};
use proptest::prelude::*;

type Vertex = usize;

fn is_v0v1_path(g: &Graph, p: &Path) -> bool {
    let (v0, v1) = (g.terminals(0), g.terminals(1));
    let vs = &p.vertices;
    if vs.is_empty() || vs.iter().collect::<BTreeSet<_>>().len() != vs.len() || p.edges.len() + 1 != vs.len() {
        return false;
    }
    for (k, &e) in p.edges.iter().enumerate() {
        let Some(edge) = g.edge(e) else { return false };
        let ends = [edge.u, edge.v];
        if !(ends.contains(&vs[k]) && ends.contains(&vs[k + 1])) {
            return false;
        }
    }
    if vs.len() == 1 {
        return v0.contains(&vs[0]) && v1.contains(&vs[0]);
    }
    let (a, b) = (vs[0], vs[vs.len() - 1]);
    let inner_clear = vs[1..vs.len() - 1].iter().all(|v| !v0.contains(v) && !v1.contains(v));
    let oriented = |s: Vertex, t: Vertex| v0.contains(&s) && !v1.contains(&s) && v1.contains(&t) && !v0.contains(&t);
    inner_clear && (oriented(a, b) || oriented(b, a))
}

fn is_path_system(g: &Graph, ps: &PathSystem) -> bool {
    let total: usize = ps.paths.iter().map(|p| p.vertices.len()).sum();
    ps.paths.iter().all(|p| is_v0v1_path(g, p)) && ps.vertices().len() == total
}

/// `V(out) ∩ V_side ⊇ V(input) ∩ V_side`.
fn covers(g: &Graph, out: &PathSystem, input: &PathSystem, side: usize) -> bool {
    let have = out.vertices();
    input.vertices().iter().filter(|v| g.is_terminal(side, **v)).all(|v| have.contains(v))
}

/// Every `V0V1`-path of `g`, by depth-first search over simple paths.
fn all_paths(g: &Graph) -> Vec<Path> {
    fn extend(g: &Graph, p: &mut Path, out: &mut Vec<Path>) {
        if is_v0v1_path(g, p) {
            out.push(p.clone());
        }
        let last = *p.vertices.last().unwrap();
        for e in g.edges() {
            if e.u != last && e.v != last || e.is_self_loop() {
                continue;
            }
            let next = e.other(last);
            if p.vertices.contains(&next) {
                continue;
            }
            p.vertices.push(next);
            p.edges.push(e.element);
            extend(g, p, out);
            p.vertices.pop();
            p.edges.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        extend(g, &mut Path::trivial(v), &mut out);
    }
    out
}

/// Every system of pairwise disjoint `V0V1`-paths, keeping one
/// orientation per path.
fn all_systems(g: &Graph) -> Vec<PathSystem> {
    let paths: Vec<Path> = all_paths(g)
        .into_iter()
        .filter(|p| p.vertices.first() <= p.vertices.last())
        .collect();
    let mut out = vec![PathSystem::default()];
    for p in paths {
        let grown: Vec<PathSystem> = out
            .iter()
            .filter(|s| p.vertices.iter().all(|v| !s.vertices().contains(v)))
            .map(|s| {
                let mut s = s.clone();
                s.paths.push(p.clone());
                s
            })
            .collect();
        out.extend(grown);
    }
    out
}

fn matched(g: &Graph, m: &ElementSet) -> BTreeSet<Vertex> {
    m.iter().flat_map(|e| {
        let edge = g.edge(e).unwrap();
        [edge.u, edge.v]
    })
    .collect()
}

fn is_matching(g: &Graph, m: &ElementSet) -> bool {
    matched(g, m).len() == 2 * m.len() && m.iter().all(|e| !g.edge(e).unwrap().is_self_loop())
}

fn spans(m: &MatroidExpr, x: &ElementSet, y: &ElementSet) -> bool {
    m.rank(&x.union(y)).unwrap() == m.rank(x).unwrap()
}

fn common(m0: &MatroidExpr, m1: &MatroidExpr) -> Vec<ElementSet> {
    m0.ground().subsets().filter(|i| m0.independent(i) && m1.independent(i)).collect()
}

/// Some split `E = E0 ⊔ E1` with `I ∩ E_i` spanning `E_i` in `M_i`.
fn strongly_maximal(m0: &MatroidExpr, m1: &MatroidExpr, i: &ElementSet) -> bool {
    let e = m0.ground();
    e.subsets().any(|e0| {
        let e1 = e.difference(&e0);
        spans(m0, &i.intersection(&e0), &e0) && spans(m1, &i.intersection(&e1), &e1)
    })
}

fn below(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet, i: &ElementSet) -> bool {
    spans(m0, i, j) && spans(m1, i, j)
}

fn graph(n: usize, edges: &[(usize, usize)], v0: &[usize], v1: &[usize]) -> Arc<Graph> {
    let mut g = Graph::new(n);
    for (k, &(u, v)) in edges.iter().enumerate() {
        g.add_edge(Element(k), u, v).unwrap();
    }
    g.set_terminals(0, v0.iter().copied()).unwrap();
    g.set_terminals(1, v1.iter().copied()).unwrap();
    Arc::new(g)
}

const VARIANTS: [ExchangeVariant; 3] = [
    ExchangeVariant::Ordered,
    ExchangeVariant::Greedy(TieBreak::LeastId),
    ExchangeVariant::Greedy(TieBreak::GreatestId),
];

#[test]
fn two_disjoint_edges_have_one_covering_system() {
    // a0-b0 and a1-b1 with a's in V0 and b's in V1.
    let g = graph(4, &[(0, 1), (2, 3)], &[0, 2], &[1, 3]);
    let terminals: BTreeSet<Vertex> = (0..4).collect();
    let covering: Vec<PathSystem> = all_systems(&g).into_iter().filter(|s| s.vertices() == terminals).collect();
    assert_eq!(covering.len(), 1);
    let p0 = PathSystem::from_edges(&g, &ElementSet::from([0])).unwrap();
    let p1 = PathSystem::from_edges(&g, &ElementSet::from([1])).unwrap();
    for variant in VARIANTS {
        let out = merge_path_systems(&g, &p0, &p1, variant).unwrap();
        assert_eq!(out.vertices(), terminals);
        assert_eq!(out.edges(), covering[0].edges());
    }
}

#[test]
fn equal_systems_come_back_unchanged() {
    let g = graph(2, &[(0, 1)], &[0], &[1]);
    let p = PathSystem::from_edges(&g, &ElementSet::from([0])).unwrap();
    let out = merge_path_systems(&g, &p, &p, ExchangeVariant::Ordered).unwrap();
    assert_eq!(out, p);
}

#[test]
fn four_cycle_has_exactly_two_qualifying_matchings() {
    // a0=0 b0=1 a1=2 b1=3; edges a0b0, b0a1, a1b1, b1a0.
    let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0, 2], &[1, 3]);
    let (i0, i1) = (ElementSet::from([0]), ElementSet::from([2]));
    let need: BTreeSet<Vertex> = (0..4).collect();
    let qualifying: Vec<ElementSet> = g
        .edge_set()
        .subsets()
        .filter(|m| is_matching(&g, m) && matched(&g, m) == need)
        .collect();
    assert_eq!(qualifying.len(), 2);
    for variant in VARIANTS {
        let out = ore_matching(&g, &i0, &i1, variant).unwrap();
        assert!(qualifying.contains(&out), "{out:?}");
    }

    let (m0, m1) = bipartite_partition_matroids(&g).unwrap();
    let w = max_common_independent(&m0, &m1, &i0).unwrap();
    assert_eq!(w.set.len(), 2);
    assert!(below(&m0, &m1, &i0, &w.set));
    assert!(strongly_maximal(&m0, &m1, &w.set));
}

#[test]
fn merge_rejects_invalid_systems() {
    let g = graph(3, &[(0, 1), (1, 2)], &[0], &[1, 2]);
    // 0-1-2 passes through the terminal 1, so it is not minimal.
    let bad = PathSystem::from_vertex_sequences(&g, &[vec![0, 1, 2]]).unwrap();
    let good = PathSystem::from_vertex_sequences(&g, &[vec![0, 1]]).unwrap();
    assert!(merge_path_systems(&g, &bad, &good, ExchangeVariant::Ordered).is_err());
}

#[test]
fn matchings_need_bipartite_graphs() {
    let g = graph(3, &[(0, 1), (1, 2), (2, 0)], &[0], &[1, 2]);
    assert!(ore_matching(&g, &ElementSet::new(), &ElementSet::new(), ExchangeVariant::Ordered).is_err());
}

fn shape(elements: usize, density: f64) -> Shape {
    Shape {
        elements,
        density,
        ..Shape::default()
    }
}

fn variant() -> impl Strategy<Value = ExchangeVariant> {
    prop_oneof![
        Just(ExchangeVariant::Ordered),
        Just(ExchangeVariant::Greedy(TieBreak::LeastId)),
        any::<u64>().prop_map(|s| ExchangeVariant::Greedy(TieBreak::Seeded(s))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn merged_systems_are_valid_and_cover(seed in any::<u64>(), n in 1usize..=10, d in 0.2f64..0.7, variant in variant()) {
        let (g, p0, p1) = gen::paths(InstanceSeed::new(seed, shape(n, d))).unwrap();
        prop_assert!(is_path_system(&g, &p0) && is_path_system(&g, &p1));
        let out = merge_path_systems(&g, &p0, &p1, variant).unwrap();
        prop_assert!(is_path_system(&g, &out), "{:?}", out);
        prop_assert!(covers(&g, &out, &p0, 0) && covers(&g, &out, &p1, 1));
    }

    /// On small graphs the output is one of the enumerated systems.
    #[test]
    fn merged_system_is_enumerated(seed in any::<u64>(), n in 1usize..=6) {
        let (g, p0, p1) = gen::paths(InstanceSeed::new(seed, shape(n, 0.5))).unwrap();
        let out = merge_path_systems(&g, &p0, &p1, ExchangeVariant::Ordered).unwrap();
        let key = |s: &PathSystem| {
            let mut ps: Vec<Vec<Vertex>> = s
                .paths
                .iter()
                .map(|p| {
                    let mut v = p.vertices.clone();
                    if v.first() > v.last() {
                        v.reverse();
                    }
                    v
                })
                .collect();
            ps.sort();
            ps
        };
        let systems: Vec<_> = all_systems(&g).iter().map(key).collect();
        prop_assert!(systems.contains(&key(&out)));
    }

    #[test]
    fn ore_matchings_cover_both_sides(seed in any::<u64>(), n in 2usize..=10, d in 0.2f64..0.9, variant in variant()) {
        let (g, i0, i1) = gen::bipartite(InstanceSeed::new(seed, shape(n, d))).unwrap();
        let out = ore_matching(&g, &i0, &i1, variant).unwrap();
        prop_assert!(is_matching(&g, &out));
        let have = matched(&g, &out);
        for (side, input) in [(0, &i0), (1, &i1)] {
            for v in matched(&g, input) {
                if g.is_terminal(side, v) {
                    prop_assert!(have.contains(&v), "vertex {} lost", v);
                }
            }
        }
    }

    #[test]
    fn augmentation_reaches_the_maximum(seed in any::<u64>(), n in 0usize..=9, mix in prop_oneof![Just(Mix::All), Just(Mix::Partition)]) {
        let (m0, m1, j) = gen::sm_pair(InstanceSeed::new(seed, Shape { elements: n, mix, ..Shape::default() })).unwrap();
        let w = max_common_independent(&m0, &m1, &j).unwrap();
        let max = common(&m0, &m1).iter().map(ElementSet::len).max().unwrap();
        prop_assert_eq!(w.set.len(), max);
        prop_assert!(below(&m0, &m1, &j, &w.set));
        prop_assert!(w.e0.is_disjoint(&w.e1) && w.e0.union(&w.e1) == *m0.ground());
        prop_assert!(spans(&m0, &w.set.intersection(&w.e0), &w.e0));
        prop_assert!(spans(&m1, &w.set.intersection(&w.e1), &w.e1));
    }

    #[test]
    fn both_routes_give_strongly_maximal_sets_above_j(seed in any::<u64>(), n in 0usize..=8) {
        let (m0, m1, j) = gen::sm_pair(InstanceSeed::new(seed, shape(n, 0.5))).unwrap();
        for route in [SmRoute::Proof, SmRoute::Augment] {
            let w = strongly_maximal_above(&m0, &m1, &j, route).unwrap();
            prop_assert!(m0.independent(&w.set) && m1.independent(&w.set));
            prop_assert!(strongly_maximal(&m0, &m1, &w.set), "{:?} via {:?}", w.set, route);
            prop_assert!(below(&m0, &m1, &j, &w.set));
            prop_assert!(w.holds(&m0, &m1));
        }
    }

    /// At finite scale strong maximality is maximum cardinality.
    #[test]
    fn strongly_maximal_iff_maximum(seed in any::<u64>(), n in 0usize..=6) {
        let (m0, m1, _) = gen::sm_pair(InstanceSeed::new(seed, shape(n, 0.5))).unwrap();
        let sets = common(&m0, &m1);
        let max = sets.iter().map(ElementSet::len).max().unwrap();
        for i in &sets {
            prop_assert_eq!(strongly_maximal(&m0, &m1, i), i.len() == max, "{:?}", i);
        }
    }

    #[test]
    fn domination_is_a_preorder(seed in any::<u64>(), n in 0usize..=6) {
        let (m0, m1, _) = gen::sm_pair(InstanceSeed::new(seed, shape(n, 0.5))).unwrap();
        let sets = common(&m0, &m1);
        for a in &sets {
            prop_assert!(dominates(&m0, &m1, a, a));
            for b in &sets {
                prop_assert_eq!(dominates(&m0, &m1, a, b), below(&m0, &m1, a, b));
                if !below(&m0, &m1, a, b) {
                    continue;
                }
                for c in sets.iter().filter(|c| below(&m0, &m1, b, c)) {
                    prop_assert!(below(&m0, &m1, a, c));
                }
            }
        }
    }
}

#[test]
fn strongly_maximal_j_is_dominated_by_the_output() {
    for seed in 0..50 {
        let (m0, m1, _) = gen::sm_pair(InstanceSeed::new(seed, shape(6, 0.5))).unwrap();
        let sets = common(&m0, &m1);
        let max = sets.iter().map(ElementSet::len).max().unwrap();
        let j = sets.iter().find(|s| s.len() == max).unwrap();
        for route in [SmRoute::Proof, SmRoute::Augment] {
            let w = strongly_maximal_above(&m0, &m1, j, route).unwrap();
            assert!(below(&m0, &m1, j, &w.set));
            assert!(strongly_maximal(&m0, &m1, &w.set));
        }
    }
}

#[test]
fn empty_ground_is_strongly_maximal() {
    let e = ElementSet::new();
    let free = MatroidExpr::free(e.clone());
    assert!(strongly_maximal(&free, &free, &e));
    let w = strongly_maximal_above(&free, &free, &e, SmRoute::Proof).unwrap();
    assert!(w.set.is_empty());
}

/// Edge sets that stay a forest once `vi` is glued to one vertex.
fn forest_after_gluing(g: &Graph, vi: &BTreeSet<Vertex>, edges: &ElementSet) -> bool {
    let glue = |v: Vertex| vi.first().copied().filter(|_| vi.contains(&v)).unwrap_or(v);
    let mut parent: Vec<Vertex> = (0..g.vertex_count()).collect();
    fn find(p: &mut [Vertex], x: Vertex) -> Vertex {
        let mut x = x;
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for e in edges.iter() {
        let edge = g.edge(e).unwrap();
        let (a, b) = (find(&mut parent, glue(edge.u)), find(&mut parent, glue(edge.v)));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn contracted_cycle_matroid_glues_terminals(seed in any::<u64>(), n in 1usize..=6, side in 0usize..2) {
        let (g, _, _) = gen::paths(InstanceSeed::new(seed, shape(n, 0.5))).unwrap();
        let vi = g.terminals(side).clone();
        let m = contracted_cycle_matroid(&g, &vi).unwrap();
        for x in g.edge_set().subsets() {
            prop_assert_eq!(m.independent(&x), forest_after_gluing(&g, &vi, &x), "{:?}", x);
        }
    }
}
