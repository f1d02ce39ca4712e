//! A well-order on elements with a designated initial segment, and the
//! induced order `≺` on finite subsets.
//!
//! For `X ≠ Y`, `X ≺ Y` iff `X = ∅`, or `max X < max Y`, or both maxima
//! equal some `z` and `X - z ≺ Y - z`. Equivalently, `≺` compares the
//! binary numbers whose bit `k` is set when the element at position `k`
//! of the order is a member; [`SubsetOrder::compare`] follows the
//! recursive definition directly and the tests check the two against
//! each other.

use std::cmp::Ordering;

use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ElementOrder {
    sequence: Vec<Element>,
    /// Position of each element, indexed by element id.
    position: Vec<Option<usize>>,
    initial: ElementSet,
}

impl ElementOrder {
    /// Explicit order. `initial` must occupy a prefix of `sequence`.
    pub fn new(sequence: Vec<Element>, initial: ElementSet) -> Result<Self> {
        let max_id = sequence.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let mut position = vec![None; max_id];
        for (k, e) in sequence.iter().enumerate() {
            if position[e.0].replace(k).is_some() {
                return Err(Error::input(format!("element {e} occurs twice in the order")));
            }
        }
        let members: ElementSet = sequence.iter().copied().collect();
        if !initial.is_subset(&members) {
            return Err(Error::input("initial segment contains elements outside the order"));
        }
        let prefix: ElementSet = sequence[..initial.len()].iter().copied().collect();
        if prefix != initial {
            return Err(Error::input(
                "initial segment does not occupy a prefix of the order",
            ));
        }
        Ok(Self {
            sequence,
            position,
            initial,
        })
    }

    /// Canonical (id) order on `ground`, stably reordered so that `initial`
    /// comes first.
    pub fn with_initial_segment(ground: &ElementSet, initial: &ElementSet) -> Result<Self> {
        if !initial.is_subset(ground) {
            return Err(Error::input("initial segment is not a subset of the ground set"));
        }
        let sequence = initial
            .iter()
            .chain(ground.difference(initial).iter())
            .collect();
        Self::new(sequence, initial.clone())
    }

    pub fn sequence(&self) -> &[Element] {
        &self.sequence
    }

    pub fn initial_segment(&self) -> &ElementSet {
        &self.initial
    }

    pub fn position(&self, e: Element) -> Option<usize> {
        self.position.get(e.0).copied().flatten()
    }

    fn pos(&self, e: Element) -> Result<usize> {
        self.position(e)
            .ok_or_else(|| Error::input(format!("element {e} is not covered by the order")))
    }

    pub fn contains_all(&self, x: &ElementSet) -> bool {
        x.iter().all(|e| self.position(e).is_some())
    }

    /// The `<`-greatest member of `x`.
    pub fn max_element(&self, x: &ElementSet) -> Result<Element> {
        let mut best: Option<(usize, Element)> = None;
        for e in x {
            let p = self.pos(e)?;
            if best.is_none_or(|(q, _)| p > q) {
                best = Some((p, e));
            }
        }
        best.map(|(_, e)| e)
            .ok_or_else(|| Error::contract("max_element of the empty set"))
    }

    /// Members of `x` from greatest to least.
    pub fn descending(&self, x: &ElementSet) -> Result<Vec<Element>> {
        let mut v: Vec<(usize, Element)> = x.iter().map(|e| Ok((self.pos(e)?, e))).collect::<Result<_>>()?;
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Ok(v.into_iter().map(|(_, e)| e).collect())
    }
}

#[derive(Clone, Debug)]
pub struct SubsetOrder {
    base: ElementOrder,
}

impl SubsetOrder {
    pub fn new(base: ElementOrder) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &ElementOrder {
        &self.base
    }

    pub fn compare(&self, x: &ElementSet, y: &ElementSet) -> Result<Ordering> {
        let xs = self.base.descending(x)?;
        let ys = self.base.descending(y)?;
        // Peel off shared maxima until the sets differ.
        let mut i = 0;
        loop {
            match (xs.get(i), ys.get(i)) {
                (None, None) => return Ok(Ordering::Equal),
                (None, Some(_)) => return Ok(Ordering::Less),
                (Some(_), None) => return Ok(Ordering::Greater),
                (Some(&a), Some(&b)) if a == b => i += 1,
                (Some(&a), Some(&b)) => {
                    return Ok(self.base.pos(a)?.cmp(&self.base.pos(b)?));
                }
            }
        }
    }

    pub fn precedes(&self, x: &ElementSet, y: &ElementSet) -> Result<bool> {
        Ok(self.compare(x, y)? == Ordering::Less)
    }

    /// The `≺`-least subset `S` of `pool` with `accept(S)`, assuming
    /// `accept` is monotone under inclusion and `accept(pool)` holds.
    ///
    /// Walks `pool` from its greatest element down, dropping each element
    /// whose removal keeps the predicate true. Deciding the highest
    /// position first is exactly how `≺` ranks sets, and monotonicity
    /// makes keeping every lower element the best remaining choice.
    pub fn least_accepted(&self, pool: &ElementSet, mut accept: impl FnMut(&ElementSet) -> bool) -> Result<ElementSet> {
        let mut s = pool.clone();
        for e in self.base.descending(pool)? {
            let smaller = s.without(e);
            if accept(&smaller) {
                s = smaller;
            }
        }
        Ok(s)
    }
}
