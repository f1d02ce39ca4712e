//! Seeded instance generators. Same seed and shape, same instance.
//!
//! Matroids are drawn from graphic, partition, uniform, free and loop
//! leaves combined with duals, minors (over a few fresh elements that are
//! then deleted or contracted) and direct sums. Sets that must be
//! independent are grown greedily in random order, keeping an element only
//! if independence survives.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::exchange::ExchangeInstance;
use crate::graph::{Graph, Vertex};
use crate::graph_apps::{Path, PathSystem};
use crate::matroid::{Block, MatroidExpr, Mode};
use crate::partition::{FamilyCbInstance, FamilyInstance, FamilyMember};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mix {
    /// Every construction, nested up to two levels.
    #[default]
    All,
    Graphic,
    Partition,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    /// `|E|`, or `|V|` for graph shapes.
    pub elements: usize,
    /// `|Θ|` for family shapes.
    pub indices: usize,
    pub mix: Mix,
    /// Probability used for random memberships and edges.
    pub density: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            elements: 6,
            indices: 2,
            mix: Mix::All,
            density: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceSeed {
    pub seed: u64,
    pub shape: Shape,
}

impl InstanceSeed {
    pub fn new(seed: u64, shape: Shape) -> Self {
        Self { seed, shape }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn check(&self, max_elements: usize, need_indices: bool) -> Result<()> {
        let s = &self.shape;
        if s.elements > max_elements {
            return Err(Error::input(format!("shape asks for {} elements; at most {max_elements}", s.elements)));
        }
        if need_indices && s.indices == 0 {
            return Err(Error::input("shape needs at least one index"));
        }
        if !(0.0..=1.0).contains(&s.density) {
            return Err(Error::input("density must lie in [0, 1]"));
        }
        Ok(())
    }
}

struct MatroidGen<'a> {
    rng: &'a mut ChaCha8Rng,
    mix: Mix,
    fresh: usize,
}

impl MatroidGen<'_> {
    fn leaf(&mut self, ground: &ElementSet) -> MatroidExpr {
        let kind = match self.mix {
            Mix::Graphic => 0,
            Mix::Partition => 1,
            Mix::Uniform => 2,
            Mix::All => self.rng.gen_range(0..10),
        };
        match kind {
            0 | 5 | 6 => self.graphic(ground),
            1 | 7 => self.partition(ground),
            2 | 8 => {
                let k = self.rng.gen_range(0..=ground.len());
                MatroidExpr::uniform(k, ground.clone())
            }
            3 => MatroidExpr::free(ground.clone()),
            _ => {
                if self.rng.gen_bool(0.5) {
                    MatroidExpr::loops(ground.clone())
                } else {
                    self.graphic(ground)
                }
            }
        }
    }

    fn graphic(&mut self, ground: &ElementSet) -> MatroidExpr {
        let n = self.rng.gen_range(2..=ground.len().max(1) / 2 + 2);
        let mut g = Graph::new(n);
        for e in ground {
            let u = self.rng.gen_range(0..n);
            let v = if self.rng.gen_bool(0.08) { u } else { self.rng.gen_range(0..n) };
            g.add_edge(e, u, v).expect("fresh endpoints and ids");
        }
        let classes = if n > 2 && self.rng.gen_bool(0.2) { vec![vec![0, 1]] } else { vec![] };
        MatroidExpr::graphic(Arc::new(g), classes).expect("valid classes")
    }

    fn partition(&mut self, ground: &ElementSet) -> MatroidExpr {
        let k = self.rng.gen_range(1..=ground.len().max(1));
        let mut blocks = vec![ElementSet::new(); k];
        for e in ground {
            blocks[self.rng.gen_range(0..k)].insert(e);
        }
        let blocks = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|elements| {
                let capacity = self.rng.gen_range(0..=elements.len());
                Block { elements, capacity }
            })
            .collect();
        MatroidExpr::partition(blocks).expect("disjoint blocks")
    }

    fn expr(&mut self, ground: &ElementSet, depth: usize) -> MatroidExpr {
        if depth == 0 || self.mix != Mix::All {
            return self.leaf(ground);
        }
        let m = match self.rng.gen_range(0..8) {
            0 | 1 => self.expr(ground, depth - 1).dual(),
            2 | 3 => {
                let extra: ElementSet = (0..self.rng.gen_range(1..=2))
                    .map(|_| {
                        self.fresh += 1;
                        Element(self.fresh - 1)
                    })
                    .collect();
                let base = self.expr(&ground.union(&extra), depth - 1);
                let contracted: ElementSet = extra.iter().filter(|_| self.rng.gen_bool(0.5)).collect();
                let deleted = extra.difference(&contracted);
                base.contract(&contracted)
                    .and_then(|m| m.delete(&deleted))
                    .expect("extras lie in the ground set")
            }
            4 if ground.len() >= 2 => {
                let (a, b): (Vec<Element>, Vec<Element>) = ground.iter().partition(|_| self.rng.gen_bool(0.5));
                let parts = [a, b].map(|p| p.into_iter().collect::<ElementSet>());
                let children = parts
                    .iter()
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        let c = self.expr(p, depth - 1);
                        if self.rng.gen_bool(0.5) {
                            let mode = if self.rng.gen_bool(0.5) { Mode::Finitary } else { Mode::Cofinitary };
                            c.with_mode(mode)
                        } else {
                            c
                        }
                    })
                    .collect();
                MatroidExpr::direct_sum(children).expect("disjoint parts")
            }
            _ => self.leaf(ground),
        };
        if self.rng.gen_bool(0.1) {
            let mode = if self.rng.gen_bool(0.5) { Mode::Finitary } else { Mode::Cofinitary };
            m.with_mode(mode)
        } else {
            m
        }
    }
}

fn matroid_gen<'a>(rng: &'a mut ChaCha8Rng, mix: Mix, ground: &ElementSet) -> MatroidGen<'a> {
    let fresh = ground.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    MatroidGen { rng, mix, fresh }
}

/// A random matroid on `ground`.
pub fn random_matroid(rng: &mut ChaCha8Rng, mix: Mix, ground: &ElementSet) -> MatroidExpr {
    matroid_gen(rng, mix, ground).expr(ground, 2)
}

/// Grows a set in random order, keeping elements with probability
/// `density` while `ok` holds.
fn greedy_subset(rng: &mut ChaCha8Rng, ground: &ElementSet, density: f64, ok: impl Fn(&ElementSet) -> bool) -> ElementSet {
    let mut order: Vec<Element> = ground.iter().collect();
    order.shuffle(rng);
    let mut s = ElementSet::new();
    for e in order {
        if rng.gen_bool(density) && ok(&s.with(e)) {
            s.insert(e);
        }
    }
    s
}

fn common_independent(rng: &mut ChaCha8Rng, m0: &MatroidExpr, m1: &MatroidExpr, density: f64) -> ElementSet {
    greedy_subset(rng, m0.ground(), density, |x| m0.independent(x) && m1.independent(x))
}

fn random_subset(rng: &mut ChaCha8Rng, ground: &ElementSet, density: f64) -> ElementSet {
    ground.iter().filter(|_| rng.gen_bool(density)).collect()
}

/// Two matroids on `E = {0..n}` with `I0`, `I1` independent in both.
pub fn exchange(seed: InstanceSeed) -> Result<ExchangeInstance> {
    seed.check(20, false)?;
    let mut rng = seed.rng();
    let ground = ElementSet::full(seed.shape.elements);
    let m0 = random_matroid(&mut rng, seed.shape.mix, &ground);
    let m1 = random_matroid(&mut rng, seed.shape.mix, &ground);
    // Lean towards full sets so the exchange has work to do.
    let d = 0.5 + seed.shape.density / 2.0;
    let i0 = common_independent(&mut rng, &m0, &m1, d);
    let i1 = common_independent(&mut rng, &m0, &m1, d);
    ExchangeInstance::new(m0, m1, i0, i1)
}

/// `|Θ|` matroids (some in cofinitary mode, some mixed sums) with disjoint
/// `P_i` and covering `R_i`. The `P_i` may be dependent and the `R_i` may
/// overlap or meet `P_i`.
pub fn family(seed: InstanceSeed) -> Result<FamilyInstance> {
    seed.check(20, true)?;
    let mut rng = seed.rng();
    let s = seed.shape;
    let ground = ElementSet::full(s.elements);
    let mut members: Vec<FamilyMember> = (0..s.indices)
        .map(|_| {
            let m = random_matroid(&mut rng, s.mix, &ground);
            let m = match rng.gen_range(0..4) {
                0 => m.with_mode(Mode::Cofinitary),
                1 => m.with_mode(Mode::Finitary),
                _ => m,
            };
            FamilyMember {
                matroid: m,
                packing: ElementSet::new(),
                covering: ElementSet::new(),
            }
        })
        .collect();
    for e in &ground {
        if rng.gen_bool(s.density) {
            members[rng.gen_range(0..s.indices)].packing.insert(e);
        }
        members[rng.gen_range(0..s.indices)].covering.insert(e);
        for m in members.iter_mut() {
            if rng.gen_bool(s.density / 4.0) {
                m.covering.insert(e);
            }
        }
    }
    let inst = FamilyInstance::new(ground, members);
    inst.validate()?;
    Ok(inst)
}

/// Two matroids on `E` and two arbitrary subsets.
pub fn set_pair(seed: InstanceSeed) -> Result<(MatroidExpr, MatroidExpr, ElementSet, ElementSet)> {
    seed.check(20, false)?;
    let mut rng = seed.rng();
    let ground = ElementSet::full(seed.shape.elements);
    let m0 = random_matroid(&mut rng, seed.shape.mix, &ground);
    let m1 = random_matroid(&mut rng, seed.shape.mix, &ground);
    let f0 = random_subset(&mut rng, &ground, seed.shape.density);
    let f1 = random_subset(&mut rng, &ground, seed.shape.density);
    Ok((m0, m1, f0, f1))
}

/// Arbitrary `P_i`, `R_i` and a matroid `N_e` on the indices per element.
pub fn family_cb(seed: InstanceSeed) -> Result<FamilyCbInstance> {
    seed.check(12, true)?;
    let mut rng = seed.rng();
    let s = seed.shape;
    let ground = ElementSet::full(s.elements);
    let theta = ElementSet::full(s.indices);
    let members = (0..s.indices)
        .map(|_| FamilyMember {
            matroid: random_matroid(&mut rng, s.mix, &ground),
            packing: random_subset(&mut rng, &ground, s.density),
            covering: random_subset(&mut rng, &ground, s.density),
        })
        .collect();
    let index_matroids = ground.iter().map(|_| random_matroid(&mut rng, s.mix, &theta)).collect();
    Ok(FamilyCbInstance {
        ground,
        members,
        index_matroids,
    })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut g = Graph::new(n);
    let mut id = 0;
    for u in 0..n {
        for v in u..n {
            let copies = if u == v {
                usize::from(rng.gen_bool(0.05))
            } else {
                usize::from(rng.gen_bool(density)) + usize::from(rng.gen_bool(density / 6.0))
            };
            for _ in 0..copies {
                g.add_edge(Element(id), u, v).expect("declared vertices");
                id += 1;
            }
        }
    }
    g
}

/// A random maximal system of disjoint `V0V1`-paths.
fn random_path_system(rng: &mut ChaCha8Rng, g: &Graph) -> PathSystem {
    let (v0, v1) = (g.terminals(0), g.terminals(1));
    let mut used: BTreeSet<Vertex> = BTreeSet::new();
    let mut paths = Vec::new();
    loop {
        let mut starts: Vec<Vertex> = v0.iter().copied().filter(|v| !used.contains(v)).collect();
        starts.shuffle(rng);
        let mut found = None;
        for s in starts {
            if v1.contains(&s) {
                found = Some(Path::trivial(s));
                break;
            }
            if let Some(p) = random_path_from(rng, g, s, &used) {
                found = Some(p);
                break;
            }
        }
        match found {
            Some(p) => {
                used.extend(p.vertices.iter().copied());
                paths.push(p);
            }
            None => return PathSystem { paths },
        }
    }
}

/// Randomised BFS from `s ∈ V0 \ V1` through non-terminal unused vertices
/// to an unused vertex of `V1 \ V0`.
fn random_path_from(rng: &mut ChaCha8Rng, g: &Graph, s: Vertex, used: &BTreeSet<Vertex>) -> Option<Path> {
    let (v0, v1) = (g.terminals(0), g.terminals(1));
    let mut edges: Vec<_> = g.edges().iter().filter(|e| !e.is_self_loop()).collect();
    edges.shuffle(rng);
    let mut parent: Vec<Option<(Vertex, Element)>> = vec![None; g.vertex_count()];
    let mut seen = BTreeSet::from([s]);
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x != s && v1.contains(&x) {
            let mut vertices = vec![x];
            let mut es = Vec::new();
            let mut cur = x;
            while let Some((p, e)) = parent[cur] {
                vertices.push(p);
                es.push(e);
                cur = p;
            }
            vertices.reverse();
            es.reverse();
            return Some(Path { vertices, edges: es });
        }
        if x != s && v0.contains(&x) {
            continue;
        }
        for e in &edges {
            if e.u != x && e.v != x {
                continue;
            }
            let y = e.other(x);
            if used.contains(&y) || seen.contains(&y) {
                continue;
            }
            // Inner vertices must avoid both terminal sets; the end must be
            // in V1 only.
            if v0.contains(&y) && !v1.contains(&y) {
                continue;
            }
            if v0.contains(&y) && v1.contains(&y) {
                continue;
            }
            seen.insert(y);
            parent[y] = Some((x, e.element));
            queue.push_back(y);
        }
    }
    None
}

/// A random graph with terminal sets (possibly overlapping) and two random
/// maximal disjoint path systems.
pub fn paths(seed: InstanceSeed) -> Result<(Arc<Graph>, PathSystem, PathSystem)> {
    seed.check(12, false)?;
    let mut rng = seed.rng();
    let n = seed.shape.elements.max(1);
    let mut g = random_graph(&mut rng, n, seed.shape.density);
    let mut v0 = Vec::new();
    let mut v1 = Vec::new();
    for v in 0..n {
        match rng.gen_range(0..10) {
            0..=2 => v0.push(v),
            3..=5 => v1.push(v),
            6 => {
                v0.push(v);
                v1.push(v);
            }
            _ => {}
        }
    }
    g.set_terminals(0, v0)?;
    g.set_terminals(1, v1)?;
    let p0 = random_path_system(&mut rng, &g);
    let p1 = random_path_system(&mut rng, &g);
    Ok((Arc::new(g), p0, p1))
}

/// A bipartite graph with classes `V0 = {0..a}` and `V1 = {a..a+b}` and
/// two random matchings.
pub fn bipartite(seed: InstanceSeed) -> Result<(Arc<Graph>, ElementSet, ElementSet)> {
    seed.check(10, false)?;
    let mut rng = seed.rng();
    let n = seed.shape.elements.max(2);
    let a = rng.gen_range(1..n);
    let mut g = Graph::new(n);
    let mut id = 0;
    for u in 0..a {
        for v in a..n {
            if rng.gen_bool(seed.shape.density) {
                g.add_edge(Element(id), u, v).expect("declared vertices");
                id += 1;
            }
        }
    }
    g.set_terminals(0, 0..a)?;
    g.set_terminals(1, a..n)?;
    let edges = g.edge_set();
    let matching = |rng: &mut ChaCha8Rng| {
        greedy_subset(rng, &edges, 0.8, |m| crate::graph_apps::is_matching(&g, m))
    };
    let i0 = matching(&mut rng);
    let i1 = matching(&mut rng);
    Ok((Arc::new(g), i0, i1))
}

/// Two matroids on `E` and a common independent `J`.
pub fn sm_pair(seed: InstanceSeed) -> Result<(MatroidExpr, MatroidExpr, ElementSet)> {
    seed.check(16, false)?;
    let mut rng = seed.rng();
    let ground = ElementSet::full(seed.shape.elements);
    let m0 = random_matroid(&mut rng, seed.shape.mix, &ground);
    let m1 = random_matroid(&mut rng, seed.shape.mix, &ground);
    let j = common_independent(&mut rng, &m0, &m1, seed.shape.density);
    Ok((m0, m1, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let s = InstanceSeed::new(0, Shape::default());
        let a = exchange(s).unwrap();
        let b = exchange(s).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        a.validate().unwrap();
    }

    #[test]
    fn infeasible_shapes_are_refused() {
        let s = Shape {
            indices: 0,
            ..Shape::default()
        };
        assert!(family(InstanceSeed::new(1, s)).is_err());
        let s = Shape {
            elements: 99,
            ..Shape::default()
        };
        assert!(exchange(InstanceSeed::new(1, s)).is_err());
    }

    #[test]
    fn generated_path_systems_are_valid() {
        for seed in 0..50 {
            let (g, p0, p1) = paths(InstanceSeed::new(seed, Shape::default())).unwrap();
            assert!(p0.violations(&g).is_empty(), "{:?}", p0.violations(&g));
            assert!(p1.violations(&g).is_empty());
        }
    }
}
