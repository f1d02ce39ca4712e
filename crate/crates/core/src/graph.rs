//! Undirected multigraphs whose edges are matroid elements.
//!
//! Text format, one record per line:
//!
//! ```text
//! c optional comment
//! p edge <n> <m>
//! e <u> <v> <edge-label>
//! t0 <v> ...
//! t1 <v> ...
//! ```
//!
//! Vertex tokens are arbitrary labels numbered in order of first
//! appearance; vertices the header counts but no line names are isolated.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::element::{Element, ElementSet, GroundSet};
use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub element: Element,
    pub u: Vertex,
    pub v: Vertex,
}

impl Edge {
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    vertex_labels: Vec<String>,
    edges: Vec<Edge>,
    terminals: [BTreeSet<Vertex>; 2],
}

impl Graph {
    /// A graph on `n` vertices labelled `v0..v{n-1}`.
    pub fn new(n: usize) -> Self {
        Self {
            vertex_labels: (0..n).map(|i| format!("v{i}")).collect(),
            ..Self::default()
        }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Self {
            vertex_labels: labels,
            ..Self::default()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertex_label(&self, v: Vertex) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<Vertex> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn add_edge(&mut self, element: Element, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "edge {element} has an endpoint outside the {n} declared vertices"
            )));
        }
        if self.edges.iter().any(|e| e.element == element) {
            return Err(Error::input(format!("duplicate edge element {element}")));
        }
        self.edges.push(Edge { element, u, v });
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, element: Element) -> Option<&Edge> {
        self.edges.iter().find(|e| e.element == element)
    }

    pub fn edge_set(&self) -> ElementSet {
        self.edges.iter().map(|e| e.element).collect()
    }

    /// Terminal set `V0` (`side == 0`) or `V1` (`side == 1`).
    pub fn terminals(&self, side: usize) -> &BTreeSet<Vertex> {
        &self.terminals[side]
    }

    pub fn set_terminals(&mut self, side: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<()> {
        let set: BTreeSet<Vertex> = vertices.into_iter().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(Error::input(format!("terminal vertex {v} is not declared")));
        }
        self.terminals[side] = set;
        Ok(())
    }

    pub fn is_terminal(&self, side: usize, v: Vertex) -> bool {
        self.terminals[side].contains(&v)
    }

    /// The least-id edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<&Edge> {
        self.edges
            .iter()
            .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .min_by_key(|e| e.element)
    }

    /// Same graph with every edge element renamed through `f`.
    pub fn map_elements(&self, f: &dyn Fn(Element) -> Element) -> Graph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.element = f(e.element);
        }
        g
    }

    /// Parses the text format, registering edge labels in `ground`.
    pub fn parse(text: &str, ground: &mut GroundSet) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut labels: Vec<String> = Vec::new();
        let mut by_label: HashMap<String, Vertex> = HashMap::new();
        let mut raw_edges: Vec<(Vertex, Vertex, String, usize)> = Vec::new();
        let mut raw_terminals: [Vec<Vertex>; 2] = [Vec::new(), Vec::new()];

        let vertex = |tok: &str,
                      line: usize,
                      header: Option<(usize, usize)>,
                      labels: &mut Vec<String>,
                      by_label: &mut HashMap<String, Vertex>|
         -> Result<Vertex> {
            if let Some(&v) = by_label.get(tok) {
                return Ok(v);
            }
            let v = labels.len();
            if let Some((n, _)) = header {
                if v >= n {
                    return Err(Error::Parse {
                        line,
                        column: 1,
                        message: format!("more than {n} distinct vertices (at `{tok}`)"),
                    });
                }
            }
            labels.push(tok.to_string());
            by_label.insert(tok.to_string(), v);
            Ok(v)
        };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let Some(&kind) = toks.first() else { continue };
            let err = |message: String| Error::Parse { line, column: 1, message };
            match kind {
                "c" => {}
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate `p` header".into()));
                    }
                    if toks.len() != 4 || toks[1] != "edge" {
                        return Err(err("expected `p edge <n> <m>`".into()));
                    }
                    let n = toks[2].parse().map_err(|_| err(format!("bad vertex count `{}`", toks[2])))?;
                    let m = toks[3].parse().map_err(|_| err(format!("bad edge count `{}`", toks[3])))?;
                    header = Some((n, m));
                }
                "e" => {
                    if header.is_none() {
                        return Err(err("edge before `p` header".into()));
                    }
                    if toks.len() != 4 {
                        return Err(err("expected `e <u> <v> <edge-label>`".into()));
                    }
                    let u = vertex(toks[1], line, header, &mut labels, &mut by_label)?;
                    let v = vertex(toks[2], line, header, &mut labels, &mut by_label)?;
                    raw_edges.push((u, v, toks[3].to_string(), line));
                }
                "t0" | "t1" => {
                    if header.is_none() {
                        return Err(err("terminal set before `p` header".into()));
                    }
                    let side = usize::from(kind == "t1");
                    for tok in &toks[1..] {
                        let v = vertex(tok, line, header, &mut labels, &mut by_label)?;
                        raw_terminals[side].push(v);
                    }
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }

        let (n, m) = header.ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "missing `p edge <n> <m>` header".into(),
        })?;
        if raw_edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                column: 1,
                message: format!("header declares {m} edges, found {}", raw_edges.len()),
            });
        }
        while labels.len() < n {
            labels.push(format!("#{}", labels.len()));
        }
        let mut graph = Graph::with_labels(labels);
        let mut seen = BTreeSet::new();
        for (u, v, label, line) in raw_edges {
            if !seen.insert(label.clone()) {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("duplicate edge label `{label}`"),
                });
            }
            let element = ground.intern(&label);
            graph.add_edge(element, u, v)?;
        }
        for (side, ts) in raw_terminals.into_iter().enumerate() {
            graph.set_terminals(side, ts)?;
        }
        Ok(graph)
    }

    /// Inverse of [`Graph::parse`].
    pub fn to_text(&self, ground: &GroundSet) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.vertex_count(), self.edges.len());
        for e in &self.edges {
            let _ = writeln!(
                out,
                "e {} {} {}",
                self.vertex_labels[e.u],
                self.vertex_labels[e.v],
                ground.label(e.element)
            );
        }
        for side in 0..2 {
            if !self.terminals[side].is_empty() {
                let vs: Vec<&str> = self.terminals[side].iter().map(|&v| self.vertex_labels[v].as_str()).collect();
                let _ = writeln!(out, "t{side} {}", vs.join(" "));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "c triangle with a pendant\np edge 4 4\ne a b ab\ne b c bc\ne c a ca\ne c d cd\nt0 a\nt1 d\n";

    #[test]
    fn parse_and_print() {
        let mut ground = GroundSet::new();
        let g = Graph::parse(SAMPLE, &mut ground).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 4);
        assert_eq!(ground.label(g.edges()[3].element), "cd");
        assert!(g.is_terminal(0, 0));
        assert!(g.is_terminal(1, 3));
        let mut ground2 = GroundSet::new();
        let g2 = Graph::parse(&g.to_text(&ground), &mut ground2).unwrap();
        assert_eq!(g2.edges(), g.edges());
    }

    #[test]
    fn parse_errors_carry_line() {
        let mut ground = GroundSet::new();
        let err = Graph::parse("p edge 2 1\ne a b x\ne a b y\n", &mut ground).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Graph::parse("p edge 1 1\ne a b x\n", &mut ground).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Graph::parse("q\n", &mut ground).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn isolated_vertices_are_padded() {
        let mut ground = GroundSet::new();
        let g = Graph::parse("p edge 5 1\ne a b x\n", &mut ground).unwrap();
        assert_eq!(g.vertex_count(), 5);
    }
}
