//! Graph corollaries of the exchange results: merging two systems of
//! disjoint `V0V1`-paths, extending matchings in bipartite graphs, and
//! strongly maximal common independent sets above a prescribed one.
//!
//! A single vertex of `V0 ∩ V1` counts as a (trivial) `V0V1`-path.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::exchange::{kundu_lawler_greedy, kundu_lawler_ordered_full, ExchangeInstance, TieBreak};
use crate::graph::{Graph, Vertex};
use crate::matroid::{Block, MatroidExpr};
use crate::partition::cantor_bernstein_sets;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    /// `edges[k]` joins `vertices[k]` and `vertices[k + 1]`.
    pub edges: Vec<Element>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Self {
        Self {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSystem {
    pub paths: Vec<Path>,
}

impl PathSystem {
    /// Builds paths from vertex sequences, joining consecutive vertices by
    /// their least-id edge.
    pub fn from_vertex_sequences(g: &Graph, seqs: &[Vec<Vertex>]) -> Result<Self> {
        let mut paths = Vec::with_capacity(seqs.len());
        for seq in seqs {
            if seq.is_empty() {
                return Err(Error::input("empty path"));
            }
            let mut edges = Vec::with_capacity(seq.len() - 1);
            for w in seq.windows(2) {
                let e = g.edge_between(w[0], w[1]).ok_or_else(|| {
                    Error::input(format!(
                        "no edge between {} and {}",
                        g.vertex_label(w[0]),
                        g.vertex_label(w[1])
                    ))
                })?;
                edges.push(e.element);
            }
            paths.push(Path {
                vertices: seq.clone(),
                edges,
            });
        }
        Ok(Self { paths })
    }

    /// Path system from the endpoint pairs of a set of edges, each oriented
    /// from `V0` to `V1`.
    pub fn from_edges(g: &Graph, edges: &ElementSet) -> Result<Self> {
        let mut paths = Vec::new();
        for e in edges {
            let edge = g.edge(e).ok_or_else(|| Error::input(format!("{e} is not an edge")))?;
            let (a, b) = if g.is_terminal(0, edge.u) { (edge.u, edge.v) } else { (edge.v, edge.u) };
            paths.push(Path {
                vertices: vec![a, b],
                edges: vec![e],
            });
        }
        Ok(Self { paths })
    }

    /// One path per non-blank line, as whitespace-separated vertex labels.
    pub fn parse(text: &str, g: &Graph) -> Result<Self> {
        let mut seqs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let seq = toks
                .iter()
                .map(|t| {
                    g.vertex_by_label(t).ok_or_else(|| Error::Parse {
                        line: idx + 1,
                        column: line.find(t).map_or(1, |c| c + 1),
                        message: format!("unknown vertex `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            seqs.push(seq);
        }
        Self::from_vertex_sequences(g, &seqs)
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for p in &self.paths {
            let labels: Vec<&str> = p.vertices.iter().map(|&v| g.vertex_label(v)).collect();
            let _ = writeln!(out, "{}", labels.join(" "));
        }
        out
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect()
    }

    pub fn edges(&self) -> ElementSet {
        self.paths.iter().flat_map(|p| p.edges.iter().copied()).collect()
    }

    /// Checks that the paths are pairwise vertex-disjoint `V0V1`-paths of
    /// `g`. Returns every violation found.
    pub fn violations(&self, g: &Graph) -> Vec<String> {
        let (v0, v1) = (g.terminals(0), g.terminals(1));
        let mut out = Vec::new();
        let mut seen: BTreeMap<Vertex, usize> = BTreeMap::new();
        for (k, p) in self.paths.iter().enumerate() {
            let label = |v: Vertex| g.vertex_label(v).to_string();
            if p.vertices.is_empty() || p.edges.len() + 1 != p.vertices.len() {
                out.push(format!("path {k}: malformed"));
                continue;
            }
            for (i, &e) in p.edges.iter().enumerate() {
                let (a, b) = (p.vertices[i], p.vertices[i + 1]);
                match g.edge(e) {
                    Some(edge) if (edge.u == a && edge.v == b) || (edge.u == b && edge.v == a) => {}
                    _ => out.push(format!("path {k}: edge {e} does not join {} and {}", label(a), label(b))),
                }
            }
            for &v in &p.vertices {
                if v >= g.vertex_count() {
                    out.push(format!("path {k}: unknown vertex {v}"));
                } else if let Some(j) = seen.insert(v, k) {
                    out.push(if j == k {
                        format!("path {k}: repeats vertex {}", label(v))
                    } else {
                        format!("overlap: paths {j} and {k} share vertex {}", label(v))
                    });
                }
            }
            let (first, last) = (p.vertices[0], *p.vertices.last().expect("nonempty"));
            if p.is_trivial() {
                if !(v0.contains(&first) && v1.contains(&first)) {
                    out.push(format!("terminal miss: trivial path {k} at {} is not in V0 ∩ V1", label(first)));
                }
                continue;
            }
            let forward = v0.contains(&first) && v1.contains(&last);
            let backward = v1.contains(&first) && v0.contains(&last);
            if !forward && !backward {
                out.push(format!("terminal miss: path {k} does not join V0 and V1"));
            }
            for &v in &p.vertices[1..p.vertices.len() - 1] {
                if v0.contains(&v) || v1.contains(&v) {
                    out.push(format!("non-minimal: path {k} meets a terminal set at inner vertex {}", label(v)));
                }
            }
            for &end in [first, last].iter() {
                if v0.contains(&end) && v1.contains(&end) {
                    out.push(format!("non-minimal: path {k} has endpoint {} in V0 ∩ V1", label(end)));
                }
            }
        }
        out
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let v = self.violations(g);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::input(format!("invalid path system: {}", v.join("; "))))
        }
    }
}

/// Cycle matroid of `g` with the vertices of `vi` identified.
pub fn contracted_cycle_matroid(g: &Arc<Graph>, vi: &BTreeSet<Vertex>) -> Result<MatroidExpr> {
    let class: Vec<Vertex> = vi.iter().copied().collect();
    MatroidExpr::graphic(Arc::clone(g), vec![class])
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExchangeVariant {
    Greedy(TieBreak),
    #[default]
    Ordered,
}

impl ExchangeVariant {
    pub fn run(self, inst: &ExchangeInstance) -> Result<ElementSet> {
        match self {
            ExchangeVariant::Greedy(t) => kundu_lawler_greedy(inst, t).map(|o| o.set),
            ExchangeVariant::Ordered => kundu_lawler_ordered_full(inst).map(|(s, _)| s),
        }
    }
}

/// `V(𝒫) ∩ V_i ⊇ V(𝒫_i) ∩ V_i` for both `i`: the terminals of each input
/// system missing from the output.
pub fn coverage_misses(g: &Graph, out: &PathSystem, inputs: [&PathSystem; 2]) -> Vec<(usize, Vertex)> {
    let covered = out.vertices();
    let mut misses = Vec::new();
    for (i, p) in inputs.iter().enumerate() {
        for v in p.vertices() {
            if g.is_terminal(i, v) && !covered.contains(&v) {
                misses.push((i, v));
            }
        }
    }
    misses
}

/// Merges two path systems into one whose terminal vertices in `V_i`
/// include those of `P_i`, for both `i`.
///
/// Runs the exchange with `I_i := E(P_i)` and the matroids swapped, so that
/// `E(P_{1-i}) ⊆ span_{M_i}(I)` where `M_i` is the cycle matroid with
/// `V_i` identified. Each tree of the forest `G[I]` then meets each `V_i`
/// at most once, and the trees meeting both carry the output paths.
pub fn merge_path_systems(g: &Arc<Graph>, p0: &PathSystem, p1: &PathSystem, variant: ExchangeVariant) -> Result<PathSystem> {
    p0.validate(g)?;
    p1.validate(g)?;
    let m0 = contracted_cycle_matroid(g, g.terminals(0))?;
    let m1 = contracted_cycle_matroid(g, g.terminals(1))?;
    let inst = ExchangeInstance::new(m1, m0, p0.edges(), p1.edges())?;
    let forest = variant.run(&inst)?;

    let n = g.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    let mut adj: Vec<Vec<(Vertex, Element)>> = vec![Vec::new(); n];
    let mut touched = BTreeSet::new();
    for e in &forest {
        let edge = g.edge(e).ok_or_else(|| Error::internal(format!("{e} is not an edge")))?;
        if !uf.union(edge.u, edge.v) {
            return Err(Error::internal(format!("G[I] has a cycle through {e}")));
        }
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
        touched.extend([edge.u, edge.v]);
    }

    // Per tree, its vertex in V0 and its vertex in V1.
    let mut hits: BTreeMap<usize, [Option<Vertex>; 2]> = BTreeMap::new();
    for &v in &touched {
        let root = uf.find(v);
        let slot = hits.entry(root).or_default();
        for side in 0..2 {
            if g.is_terminal(side, v) {
                if let Some(w) = slot[side] {
                    return Err(Error::internal(format!(
                        "a tree of G[I] meets V{side} twice, at {} and {}",
                        g.vertex_label(w),
                        g.vertex_label(v)
                    )));
                }
                slot[side] = Some(v);
            }
        }
    }

    let mut paths = BTreeSet::new();
    for [a, b] in hits.into_values() {
        if let (Some(a), Some(b)) = (a, b) {
            paths.insert(tree_path(&adj, a, b));
        }
    }
    let inputs = p0.vertices().union(&p1.vertices()).copied().collect::<BTreeSet<_>>();
    for v in inputs {
        if g.is_terminal(0, v) && g.is_terminal(1, v) {
            paths.insert(Path::trivial(v));
        }
    }
    let out = PathSystem {
        paths: paths.into_iter().collect(),
    };

    let bad = out.violations(g);
    if !bad.is_empty() {
        return Err(Error::internal(format!("merged system is invalid: {}", bad.join("; "))));
    }
    if let Some((i, v)) = coverage_misses(g, &out, [p0, p1]).first() {
        return Err(Error::internal(format!(
            "merged system misses {} from V{i}",
            g.vertex_label(*v)
        )));
    }
    Ok(out)
}

/// The unique path from `a` to `b` in a forest given by adjacency lists.
fn tree_path(adj: &[Vec<(Vertex, Element)>], a: Vertex, b: Vertex) -> Path {
    let mut parent: BTreeMap<Vertex, (Vertex, Element)> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &(y, e) in &adj[x] {
            if seen.insert(y) {
                parent.insert(y, (x, e));
                queue.push_back(y);
            }
        }
    }
    let mut vertices = vec![b];
    let mut edges = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, e) = parent[&cur];
        vertices.push(p);
        edges.push(e);
        cur = p;
    }
    vertices.reverse();
    edges.reverse();
    Path { vertices, edges }
}

fn require_bipartite(g: &Graph) -> Result<()> {
    let (v0, v1) = (g.terminals(0), g.terminals(1));
    if !v0.is_disjoint(v1) || v0.len() + v1.len() != g.vertex_count() {
        return Err(Error::input("not bipartite: V0 and V1 must partition the vertices"));
    }
    if let Some(e) = g.edges().iter().find(|e| v0.contains(&e.u) == v0.contains(&e.v)) {
        return Err(Error::input(format!(
            "not bipartite: edge {} joins {} and {} in the same class",
            e.element,
            g.vertex_label(e.u),
            g.vertex_label(e.v)
        )));
    }
    Ok(())
}

pub fn is_matching(g: &Graph, m: &ElementSet) -> bool {
    let mut used = BTreeSet::new();
    m.iter().all(|e| match g.edge(e) {
        Some(edge) => !edge.is_self_loop() && used.insert(edge.u) && used.insert(edge.v),
        None => false,
    })
}

pub fn matched_vertices(g: &Graph, m: &ElementSet) -> BTreeSet<Vertex> {
    m.iter()
        .filter_map(|e| g.edge(e))
        .flat_map(|e| [e.u, e.v])
        .collect()
}

/// A matching `I` with `V(I) ∩ V_i ⊇ V(I_i) ∩ V_i` for both classes `V_i`,
/// given by the terminal sets of the bipartite graph `g`.
pub fn ore_matching(g: &Arc<Graph>, i0: &ElementSet, i1: &ElementSet, variant: ExchangeVariant) -> Result<ElementSet> {
    require_bipartite(g)?;
    for (k, m) in [i0, i1].into_iter().enumerate() {
        if !is_matching(g, m) {
            return Err(Error::input(format!("I{k} is not a matching")));
        }
    }
    let p0 = PathSystem::from_edges(g, i0)?;
    let p1 = PathSystem::from_edges(g, i1)?;
    Ok(merge_path_systems(g, &p0, &p1, variant)?.edges())
}

/// The two partition matroids of a bipartite graph: a set of edges is
/// independent in `M_i` if no two share an endpoint in `V_i`.
pub fn bipartite_partition_matroids(g: &Graph) -> Result<(MatroidExpr, MatroidExpr)> {
    require_bipartite(g)?;
    let side = |i: usize| -> Result<MatroidExpr> {
        let mut blocks: BTreeMap<Vertex, ElementSet> = BTreeMap::new();
        for e in g.edges() {
            let v = if g.is_terminal(i, e.u) { e.u } else { e.v };
            blocks.entry(v).or_default().insert(e.element);
        }
        let blocks = blocks
            .into_values()
            .map(|elements| Block { elements, capacity: 1 })
            .collect();
        MatroidExpr::partition(blocks)
    };
    Ok((side(0)?, side(1)?))
}

/// `J ⊴ I`: `J ⊆ span_M0(I) ∩ span_M1(I)`.
pub fn dominates(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet, i: &ElementSet) -> bool {
    m0.spans_all(i, j) && m1.spans_all(i, j)
}

/// A common independent set with a partition `E = E0 ⊔ E1` such that
/// `I ∩ E_i` spans `E_i` in `M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmWitness {
    pub set: ElementSet,
    pub e0: ElementSet,
    pub e1: ElementSet,
}

impl SmWitness {
    pub fn holds(&self, m0: &MatroidExpr, m1: &MatroidExpr) -> bool {
        self.e0.is_disjoint(&self.e1)
            && self.e0.union(&self.e1) == *m0.ground()
            && m0.independent(&self.set)
            && m1.independent(&self.set)
            && m0.spans_all(&self.set.intersection(&self.e0), &self.e0)
            && m1.spans_all(&self.set.intersection(&self.e1), &self.e1)
    }
}

fn check_common(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet) -> Result<()> {
    if m0.ground() != m1.ground() {
        return Err(Error::input("M0 and M1 have different ground sets"));
    }
    if !m0.is_independent(j)? || !m1.is_independent(j)? {
        return Err(Error::input(format!("{j:?} is not common independent")));
    }
    Ok(())
}

/// Maximum common independent set reached from `J` by shortest augmenting
/// paths in the exchange graph, with the partition read off the final
/// graph: `E1` is everything reachable from the free-in-`M0` elements.
///
/// Arcs go `y → x` when `I - y + x` is `M0`-independent and `x → y` when it
/// is `M1`-independent (`y ∈ I`, `x ∉ I`). Augmenting along a shortest path
/// keeps every element of the old `I` spanned in both matroids, so
/// `J ⊴ I` holds throughout.
pub fn max_common_independent(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet) -> Result<SmWitness> {
    check_common(m0, m1, j)?;
    let ground = m0.ground().clone();
    let mut set = j.clone();
    loop {
        let (path, reached) = shortest_augmenting_path(m0, m1, &ground, &set);
        match path {
            Some(p) => {
                for e in p {
                    if !set.remove(e) {
                        set.insert(e);
                    }
                }
            }
            None => {
                let w = SmWitness {
                    e0: ground.difference(&reached),
                    e1: reached,
                    set,
                };
                if !w.holds(m0, m1) {
                    return Err(Error::internal(format!("exchange-graph cut is not a witness: {w:?}")));
                }
                if !dominates(m0, m1, j, &w.set) {
                    return Err(Error::internal("augmentation lost the domination of J"));
                }
                return Ok(w);
            }
        }
    }
}

/// BFS over the exchange graph from the sources. Returns the shortest path
/// (ties by element id) and the set of reachable elements.
fn shortest_augmenting_path(
    m0: &MatroidExpr,
    m1: &MatroidExpr,
    ground: &ElementSet,
    set: &ElementSet,
) -> (Option<Vec<Element>>, ElementSet) {
    let outside = ground.difference(set);
    let sources: Vec<Element> = outside.iter().filter(|&x| m0.independent(&set.with(x))).collect();
    let sinks: ElementSet = outside.iter().filter(|&x| m1.independent(&set.with(x))).collect();
    let successors = |a: Element| -> Vec<Element> {
        if set.contains(a) {
            let base = set.without(a);
            outside.iter().filter(|&x| m0.independent(&base.with(x))).collect()
        } else {
            set.iter().filter(|&y| m1.independent(&set.without(y).with(a))).collect()
        }
    };
    let mut parent: BTreeMap<Element, Option<Element>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &s in &sources {
        parent.insert(s, None);
        queue.push_back(s);
    }
    let mut found = None;
    while let Some(a) = queue.pop_front() {
        if sinks.contains(a) {
            found = Some(a);
            break;
        }
        for b in successors(a) {
            if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(b) {
                slot.insert(Some(a));
                queue.push_back(b);
            }
        }
    }
    let Some(end) = found else {
        return (None, parent.keys().copied().collect());
    };
    let mut path = vec![end];
    let mut cur = end;
    while let Some(p) = parent[&cur] {
        path.push(p);
        cur = p;
    }
    (Some(path), ElementSet::new())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SmRoute {
    /// Start from a strongly maximal set and its partition, and rebuild
    /// each side with the two-set exchange on the induced minors.
    #[default]
    Proof,
    /// Augment directly from `J`.
    Augment,
}

/// A strongly maximal common independent set `I` with `J ⊴ I`.
pub fn strongly_maximal_above(m0: &MatroidExpr, m1: &MatroidExpr, j: &ElementSet, route: SmRoute) -> Result<SmWitness> {
    check_common(m0, m1, j)?;
    let out = match route {
        SmRoute::Augment => max_common_independent(m0, m1, j)?,
        SmRoute::Proof => {
            let base = max_common_independent(m0, m1, &ElementSet::new())?;
            let parts = [&base.e0, &base.e1];
            let ms = [m0, m1];
            let mut set = ElementSet::new();
            for i in 0..2 {
                let ei = parts[i];
                let own = ms[i].restrict(ei)?;
                let other = ms[1 - i].contract_onto(ei)?;
                let f = cantor_bernstein_sets(&own, &other, &base.set.intersection(ei), &j.intersection(ei))?;
                set = set.union(&f);
            }
            SmWitness {
                set,
                e0: base.e0,
                e1: base.e1,
            }
        }
    };
    if !out.holds(m0, m1) {
        return Err(Error::internal(format!("{route:?} route produced a set without its witness: {out:?}")));
    }
    if !dominates(m0, m1, j, &out.set) {
        return Err(Error::internal(format!("{route:?} route output does not dominate J")));
    }
    Ok(out)
}
