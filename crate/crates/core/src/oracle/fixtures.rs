//! Hand-built instances shared by tests, the acceptance suite and the CLI.

use std::sync::Arc;

use crate::element::{ElementSet, GroundSet};
use crate::error::Result;
use crate::exchange::ExchangeInstance;
use crate::graph::Graph;
use crate::matroid::MatroidExpr;

use super::FnOracle;

pub struct Fan {
    pub graph: Arc<Graph>,
    pub names: GroundSet,
    pub instance: ExchangeInstance,
    /// The ray edges `v_k v_{k+1}`, in order.
    pub ray: ElementSet,
    /// The apex edges `w v_k`, in order.
    pub apex: ElementSet,
}

/// A ray `v0 v1 ... v_{n-1}` plus an apex `w` joined to every `v_k`.
/// `M0` is its cycle matroid and `M1` is free; `I0` is the apex star and
/// `I1` the ray. Ray edges get the smaller ids.
pub fn fan(ray_vertices: usize) -> Result<Fan> {
    let n = ray_vertices;
    let mut labels: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    labels.push("w".into());
    let mut g = Graph::with_labels(labels);
    let mut names = GroundSet::new();
    let mut ray = ElementSet::new();
    let mut apex = ElementSet::new();
    for k in 0..n.saturating_sub(1) {
        let e = names.intern(&format!("v{k}v{}", k + 1));
        g.add_edge(e, k, k + 1)?;
        ray.insert(e);
    }
    for k in 0..n {
        let e = names.intern(&format!("wv{k}"));
        g.add_edge(e, n, k)?;
        apex.insert(e);
    }
    let graph = Arc::new(g);
    let m0 = MatroidExpr::graphic(Arc::clone(&graph), vec![])?;
    let m1 = MatroidExpr::free(graph.edge_set());
    let instance = ExchangeInstance::new(m0, m1, apex.clone(), ray.clone())?;
    Ok(Fan {
        graph,
        names,
        instance,
        ray,
        apex,
    })
}

/// Complete graph `K_n` with edges numbered in lexicographic vertex order.
pub fn complete_graph(n: usize) -> Arc<Graph> {
    let mut g = Graph::new(n);
    let mut id = 0;
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(crate::element::Element(id), u, v).expect("declared vertices");
            id += 1;
        }
    }
    Arc::new(g)
}

/// Independence is "even size": breaks downward closure.
pub fn even_size(n: usize) -> FnOracle<impl Fn(&ElementSet) -> bool> {
    FnOracle {
        ground: ElementSet::full(n),
        independent: |x: &ElementSet| x.len() % 2 == 0,
    }
}

/// Nothing is independent, not even the empty set.
pub fn empty_dependent(n: usize) -> FnOracle<impl Fn(&ElementSet) -> bool> {
    FnOracle {
        ground: ElementSet::full(n),
        independent: |_: &ElementSet| false,
    }
}

/// Maximal independent sets `{0, 1}` and `{2}`: downward closed but the
/// augmentation axiom fails for `I = {0}`, `J = {2}`.
pub fn unequal_maximal_sets() -> FnOracle<impl Fn(&ElementSet) -> bool> {
    FnOracle {
        ground: ElementSet::full(3),
        independent: |x: &ElementSet| x.is_subset(&ElementSet::from([0, 1])) || x.is_subset(&ElementSet::from([2])),
    }
}
