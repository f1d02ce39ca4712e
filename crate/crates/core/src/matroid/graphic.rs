use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Cycle matroid of a graph in which each listed vertex class has been
/// identified to a single vertex. Edges inside a class become loops.
#[derive(Debug)]
pub struct GraphicMatroid {
    graph: Arc<Graph>,
    classes: Vec<Vec<Vertex>>,
    /// Contracted endpoints, indexed by element id.
    endpoints: Vec<Option<(usize, usize)>>,
    vertex_count: usize,
}

impl GraphicMatroid {
    pub(super) fn new(graph: Arc<Graph>, classes: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = graph.vertex_count();
        let mut uf = UnionFind::<usize>::new(n);
        for class in &classes {
            if let Some(&v) = class.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("contract class names unknown vertex {v}")));
            }
            for pair in class.windows(2) {
                uf.union(pair[0], pair[1]);
            }
        }
        let max_id = graph.edges().iter().map(|e| e.element.0 + 1).max().unwrap_or(0);
        let mut endpoints = vec![None; max_id];
        for e in graph.edges() {
            endpoints[e.element.0] = Some((uf.find(e.u), uf.find(e.v)));
        }
        Ok(Self {
            graph,
            classes,
            endpoints,
            vertex_count: n,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    /// Size of a spanning forest of the edges in `x`.
    pub(super) fn rank(&self, x: &ElementSet) -> usize {
        let mut uf = UnionFind::<usize>::new(self.vertex_count);
        x.iter()
            .filter_map(|e| self.endpoints.get(e.0).copied().flatten())
            .filter(|&(u, v)| uf.union(u, v))
            .count()
    }

    pub(super) fn map_elements(&self, f: &dyn Fn(Element) -> Element) -> Self {
        Self::new(Arc::new(self.graph.map_elements(f)), self.classes.clone())
            .expect("classes were validated")
    }
}
