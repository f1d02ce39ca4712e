//! Finite matroids as immutable expression trees evaluated through a rank
//! oracle.
//!
//! Leaves are graphic, partition, uniform, free and all-loops matroids;
//! inner nodes are dual, deletion, contraction and direct sum. Every node
//! knows its ground set, and all queries take element sets that must be
//! subsets of it. Rank is computed structurally per node:
//!
//! * dual: `r*(X) = |X| - r(E) + r(E \ X)`
//! * deletion: the child's rank
//! * contraction by `C`: `r(X ∪ C) - r(C)`
//! * direct sum: sum over the children
//!
//! Independence, span and circuits are derived from rank.

mod graphic;
mod parse;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub use graphic::GraphicMatroid;
pub use parse::{parse_matroid, to_text, GraphLoader};

/// Declared finitary/cofinitary mode of a matroid.
///
/// Every finite matroid is both; the mode only selects which successor rule
/// the partition recursion applies to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Finitary,
    Cofinitary,
}

impl Mode {
    pub fn flip(self) -> Mode {
        match self {
            Mode::Finitary => Mode::Cofinitary,
            Mode::Cofinitary => Mode::Finitary,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Finitary => "finitary",
            Mode::Cofinitary => "cofinitary",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub elements: ElementSet,
    pub capacity: usize,
}

#[derive(Debug)]
pub enum Node {
    Graphic(GraphicMatroid),
    Partition(Vec<Block>),
    Uniform(usize),
    Free,
    Loops,
    Dual(MatroidExpr),
    Delete(MatroidExpr, ElementSet),
    Contract(MatroidExpr, ElementSet),
    DirectSum(Vec<MatroidExpr>),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    ground: ElementSet,
    full_rank: OnceLock<usize>,
}

/// A matroid expression. Cloning is cheap; the tree is shared.
#[derive(Clone)]
pub struct MatroidExpr {
    inner: Arc<Inner>,
    mode: Option<Mode>,
}

impl fmt::Debug for MatroidExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("MatroidExpr");
        d.field("node", &self.inner.node);
        if let Some(m) = self.mode {
            d.field("mode", &m);
        }
        d.finish()
    }
}

/// A minimal dependent set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit(ElementSet);

impl Circuit {
    pub fn elements(&self) -> &ElementSet {
        &self.0
    }

    pub fn into_set(self) -> ElementSet {
        self.0
    }
}

/// Wraps a set already known to be a circuit.
pub(crate) fn circuit_from_set(set: ElementSet) -> Circuit {
    Circuit(set)
}

fn not_subset(what: &str, x: &ElementSet, ground: &ElementSet) -> Error {
    let outside: Vec<usize> = x.difference(ground).iter().map(Element::id).collect();
    Error::input(format!("{what}: elements {outside:?} are outside the ground set"))
}

impl MatroidExpr {
    fn from_node(node: Node, ground: ElementSet) -> Self {
        MatroidExpr {
            inner: Arc::new(Inner {
                node,
                ground,
                full_rank: OnceLock::new(),
            }),
            mode: None,
        }
    }

    pub fn graphic(graph: Arc<Graph>, classes: Vec<Vec<Vertex>>) -> Result<Self> {
        let g = GraphicMatroid::new(graph, classes)?;
        let ground = g.graph().edge_set();
        Ok(Self::from_node(Node::Graphic(g), ground))
    }

    /// Partition matroid: at most `capacity` elements from each block.
    pub fn partition(blocks: Vec<Block>) -> Result<Self> {
        let mut ground = ElementSet::new();
        for b in &blocks {
            if !b.elements.is_disjoint(&ground) {
                return Err(Error::input("partition blocks overlap"));
            }
            ground = ground.union(&b.elements);
        }
        Ok(Self::from_node(Node::Partition(blocks), ground))
    }

    pub fn uniform(rank: usize, ground: ElementSet) -> Self {
        Self::from_node(Node::Uniform(rank), ground)
    }

    pub fn free(ground: ElementSet) -> Self {
        Self::from_node(Node::Free, ground)
    }

    pub fn loops(ground: ElementSet) -> Self {
        Self::from_node(Node::Loops, ground)
    }

    pub fn dual(&self) -> Self {
        Self::from_node(Node::Dual(self.clone()), self.ground().clone())
    }

    /// `M - X`.
    pub fn delete(&self, x: &ElementSet) -> Result<Self> {
        if !x.is_subset(self.ground()) {
            return Err(not_subset("delete", x, self.ground()));
        }
        if x.is_empty() {
            return Ok(self.clone());
        }
        Ok(Self::from_node(
            Node::Delete(self.clone(), x.clone()),
            self.ground().difference(x),
        ))
    }

    /// `M / X`.
    pub fn contract(&self, x: &ElementSet) -> Result<Self> {
        if !x.is_subset(self.ground()) {
            return Err(not_subset("contract", x, self.ground()));
        }
        if x.is_empty() {
            return Ok(self.clone());
        }
        Ok(Self::from_node(
            Node::Contract(self.clone(), x.clone()),
            self.ground().difference(x),
        ))
    }

    /// `M ↾ X`, i.e. `M - (E \ X)`.
    pub fn restrict(&self, x: &ElementSet) -> Result<Self> {
        if !x.is_subset(self.ground()) {
            return Err(not_subset("restrict", x, self.ground()));
        }
        self.delete(&self.ground().difference(x))
    }

    /// `M.X`, i.e. `M / (E \ X)`.
    pub fn contract_onto(&self, x: &ElementSet) -> Result<Self> {
        if !x.is_subset(self.ground()) {
            return Err(not_subset("contract onto", x, self.ground()));
        }
        self.contract(&self.ground().difference(x))
    }

    pub fn direct_sum(children: Vec<MatroidExpr>) -> Result<Self> {
        let mut ground = ElementSet::new();
        for c in &children {
            if !c.ground().is_disjoint(&ground) {
                return Err(Error::input("direct sum summands share elements"));
            }
            ground = ground.union(c.ground());
        }
        Ok(Self::from_node(Node::DirectSum(children), ground))
    }

    /// `M ⊕ loops(X)`; elements already in the ground set are skipped.
    pub fn extend_by_loops(&self, x: &ElementSet) -> Self {
        let extra = x.difference(self.ground());
        if extra.is_empty() {
            return self.clone();
        }
        let mode = self.declared_mode();
        Self::direct_sum(vec![self.clone(), Self::loops(extra).with_mode(mode)])
            .expect("disjoint by construction")
            .with_mode(mode)
    }

    /// Same matroid with an explicit declared mode.
    pub fn with_mode(&self, mode: Mode) -> Self {
        MatroidExpr {
            inner: Arc::clone(&self.inner),
            mode: Some(mode),
        }
    }

    pub fn node(&self) -> &Node {
        &self.inner.node
    }

    pub fn ground(&self) -> &ElementSet {
        &self.inner.ground
    }

    pub fn mode_override(&self) -> Option<Mode> {
        self.mode
    }

    /// The explicit mode if one was set, otherwise leaves are finitary, a
    /// dual flips its child's mode, minors inherit it, and a direct sum is
    /// cofinitary only when every summand is.
    pub fn declared_mode(&self) -> Mode {
        if let Some(m) = self.mode {
            return m;
        }
        match self.node() {
            Node::Dual(c) => c.declared_mode().flip(),
            Node::Delete(c, _) | Node::Contract(c, _) => c.declared_mode(),
            Node::DirectSum(cs) if !cs.is_empty() && cs.iter().all(|c| c.declared_mode() == Mode::Cofinitary) => {
                Mode::Cofinitary
            }
            _ => Mode::Finitary,
        }
    }

    fn sum_leaves(&self, out: &mut Vec<MatroidExpr>) {
        match self.node() {
            Node::DirectSum(cs) if self.mode.is_none() => {
                for c in cs {
                    c.sum_leaves(out);
                }
            }
            _ => out.push(self.clone()),
        }
    }

    /// For a direct sum (without a mode override) whose summands carry both
    /// modes, the finitary part and the cofinitary part, each a direct sum of
    /// the summands of that mode. `None` if the matroid is not mixed.
    pub fn mode_parts(&self) -> Option<(MatroidExpr, MatroidExpr)> {
        let mut leaves = Vec::new();
        self.sum_leaves(&mut leaves);
        let (fin, cofin): (Vec<_>, Vec<_>) = leaves
            .into_iter()
            .partition(|c| c.declared_mode() == Mode::Finitary);
        if fin.is_empty() || cofin.is_empty() {
            return None;
        }
        let fin = Self::direct_sum(fin).ok()?.with_mode(Mode::Finitary);
        let cofin = Self::direct_sum(cofin).ok()?.with_mode(Mode::Cofinitary);
        Some((fin, cofin))
    }

    /// Rebuilds the expression with every element renamed through `f`,
    /// which must be injective on the elements the tree mentions.
    pub fn map_elements(&self, f: &dyn Fn(Element) -> Element) -> MatroidExpr {
        let map_set = |s: &ElementSet| -> ElementSet { s.iter().map(f).collect() };
        let node = match self.node() {
            Node::Graphic(g) => Node::Graphic(g.map_elements(f)),
            Node::Partition(blocks) => Node::Partition(
                blocks
                    .iter()
                    .map(|b| Block {
                        elements: map_set(&b.elements),
                        capacity: b.capacity,
                    })
                    .collect(),
            ),
            Node::Uniform(k) => Node::Uniform(*k),
            Node::Free => Node::Free,
            Node::Loops => Node::Loops,
            Node::Dual(c) => Node::Dual(c.map_elements(f)),
            Node::Delete(c, x) => Node::Delete(c.map_elements(f), map_set(x)),
            Node::Contract(c, x) => Node::Contract(c.map_elements(f), map_set(x)),
            Node::DirectSum(cs) => Node::DirectSum(cs.iter().map(|c| c.map_elements(f)).collect()),
        };
        let mut m = Self::from_node(node, map_set(self.ground()));
        m.mode = self.mode;
        m
    }

    /// Every element mentioned anywhere in the tree, including those a
    /// minor removed from the ground set.
    pub fn support(&self) -> ElementSet {
        match self.node() {
            Node::Dual(c) | Node::Delete(c, _) | Node::Contract(c, _) => c.support(),
            Node::DirectSum(cs) => cs.iter().fold(self.ground().clone(), |a, c| a.union(&c.support())),
            _ => self.ground().clone(),
        }
    }

    fn check(&self, what: &str, x: &ElementSet) -> Result<()> {
        if x.is_subset(self.ground()) {
            Ok(())
        } else {
            Err(not_subset(what, x, self.ground()))
        }
    }

    /// Rank of the whole ground set, cached.
    pub fn full_rank(&self) -> usize {
        *self
            .inner
            .full_rank
            .get_or_init(|| self.rank_unchecked(self.ground()))
    }

    /// Rank of `x`, which must be a subset of the ground set (not checked).
    pub fn rank_unchecked(&self, x: &ElementSet) -> usize {
        debug_assert!(x.is_subset(self.ground()));
        match self.node() {
            Node::Graphic(g) => g.rank(x),
            Node::Partition(blocks) => blocks
                .iter()
                .map(|b| b.elements.intersection(x).len().min(b.capacity))
                .sum(),
            Node::Uniform(k) => x.len().min(*k),
            Node::Free => x.len(),
            Node::Loops => 0,
            Node::Dual(c) => x.len() + c.rank_unchecked(&c.ground().difference(x)) - c.full_rank(),
            Node::Delete(c, _) => c.rank_unchecked(x),
            Node::Contract(c, y) => c.rank_unchecked(&x.union(y)) - c.rank_unchecked(y),
            Node::DirectSum(cs) => cs
                .iter()
                .map(|c| c.rank_unchecked(&x.intersection(c.ground())))
                .sum(),
        }
    }

    pub fn rank(&self, x: &ElementSet) -> Result<usize> {
        self.check("rank", x)?;
        Ok(self.rank_unchecked(x))
    }

    pub fn independent(&self, x: &ElementSet) -> bool {
        self.rank_unchecked(x) == x.len()
    }

    pub fn is_independent(&self, x: &ElementSet) -> Result<bool> {
        self.check("is_independent", x)?;
        Ok(self.independent(x))
    }

    /// Whether `x` spans `e`: `e ∈ x` or `r(x + e) = r(x)`.
    pub fn spans_element(&self, x: &ElementSet, e: Element) -> bool {
        x.contains(e) || self.rank_unchecked(&x.with(e)) == self.rank_unchecked(x)
    }

    /// Whether `y ⊆ span(x)`.
    pub fn spans_all(&self, x: &ElementSet, y: &ElementSet) -> bool {
        let r = self.rank_unchecked(x);
        y.iter()
            .all(|e| x.contains(e) || self.rank_unchecked(&x.with(e)) == r)
    }

    pub fn span_unchecked(&self, x: &ElementSet) -> ElementSet {
        let r = self.rank_unchecked(x);
        let mut out = x.clone();
        for e in self.ground().difference(x).iter() {
            if self.rank_unchecked(&x.with(e)) == r {
                out.insert(e);
            }
        }
        out
    }

    pub fn span(&self, x: &ElementSet) -> Result<ElementSet> {
        self.check("span", x)?;
        Ok(self.span_unchecked(x))
    }

    pub fn is_circuit(&self, x: &ElementSet) -> bool {
        !x.is_empty() && !self.independent(x) && x.iter().all(|e| self.independent(&x.without(e)))
    }

    /// `C(e, I)`: the unique circuit through `e` inside `I + e`, or `None`
    /// when `I + e` is independent.
    pub fn fundamental_circuit(&self, e: Element, i: &ElementSet) -> Result<Option<Circuit>> {
        self.check("fundamental_circuit", &i.with(e))?;
        if i.contains(e) {
            return Err(Error::contract(format!("element {e} already lies in I")));
        }
        if !self.independent(i) {
            return Err(Error::contract("fundamental_circuit: I is dependent"));
        }
        Ok(self.fundamental_circuit_unchecked(e, i))
    }

    pub(crate) fn fundamental_circuit_unchecked(&self, e: Element, i: &ElementSet) -> Option<Circuit> {
        let mut c = i.with(e);
        if self.independent(&c) {
            return None;
        }
        for x in i.iter() {
            let smaller = c.without(x);
            if !self.independent(&smaller) {
                c = smaller;
            }
        }
        debug_assert!(c.contains(e) && self.is_circuit(&c));
        Some(Circuit(c))
    }

    /// Strong circuit elimination: for circuits `c1`, `c2` with
    /// `e ∈ c1 \ c2` and `f ∈ c1 ∩ c2`, a circuit `c3` with
    /// `e ∈ c3 ⊆ (c1 ∪ c2) - f`.
    ///
    /// The search shrinks `(c1 ∪ c2) - f` element by element while it still
    /// contains a circuit through `e`; the result is a minimal such set and
    /// therefore a circuit.
    pub fn eliminate_circuits(&self, c1: &Circuit, c2: &Circuit, e: Element, f: Element) -> Result<Circuit> {
        for (name, c) in [("C1", c1), ("C2", c2)] {
            self.check("eliminate_circuits", c.elements())?;
            if !self.is_circuit(c.elements()) {
                return Err(Error::contract(format!("{name} is not a circuit")));
            }
        }
        if !c1.elements().contains(e) || c2.elements().contains(e) {
            return Err(Error::contract(format!("e = {e} must lie in C1 \\ C2")));
        }
        if !c1.elements().contains(f) || !c2.elements().contains(f) {
            return Err(Error::contract(format!("f = {f} must lie in C1 ∩ C2")));
        }
        let pool = c1.elements().union(c2.elements()).without(f);
        self.circuit_through_within(e, &pool).ok_or_else(|| {
            Error::internal(format!(
                "circuit elimination failed: no circuit through {e} inside {pool:?}; the oracle is not a matroid"
            ))
        })
    }

    /// Some circuit `c` with `e ∈ c ⊆ pool`, if one exists.
    pub(crate) fn circuit_through_within(&self, e: Element, pool: &ElementSet) -> Option<Circuit> {
        let mut s = pool.with(e);
        if !self.spans_element(&s.without(e), e) {
            return None;
        }
        for x in pool.iter().filter(|&x| x != e) {
            let smaller = s.without(x);
            if self.spans_element(&smaller.without(e), e) {
                s = smaller;
            }
        }
        debug_assert!(self.is_circuit(&s));
        Some(Circuit(s))
    }

    /// A maximal independent subset of `x`, built greedily in id order.
    pub fn maximal_independent_subset(&self, x: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new();
        for e in x.iter() {
            let bigger = out.with(e);
            if self.independent(&bigger) {
                out = bigger;
            }
        }
        out
    }
}
