//! Elements, element sets and the label table shared by one instance.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An element of a ground set, identified by a dense index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

impl Element {
    #[inline]
    pub fn id(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const WORD: usize = 64;

/// A finite set of elements stored as a bitset.
///
/// Trailing zero words are always trimmed, so structural equality, hashing
/// and ordering agree with set equality. Iteration yields elements in
/// increasing id order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: SmallVec<[u64; 2]>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for i in 0..n {
            s.insert(Element(i));
        }
        s
    }

    pub fn singleton(e: Element) -> Self {
        let mut s = Self::new();
        s.insert(e);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, e: Element) -> bool {
        let (w, b) = (e.0 / WORD, e.0 % WORD);
        self.words.get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    /// Returns true if the element was not already present.
    pub fn insert(&mut self, e: Element) -> bool {
        let (w, b) = (e.0 / WORD, e.0 % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    /// Returns true if the element was present.
    pub fn remove(&mut self, e: Element) -> bool {
        let (w, b) = (e.0 / WORD, e.0 % WORD);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        self.trim();
        had
    }

    pub fn with(&self, e: Element) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn without(&self, e: Element) -> Self {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(short.words.iter()) {
            *w |= o;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (w, o) in s.words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        s.trim();
        s
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Smallest element by id.
    pub fn first(&self) -> Option<Element> {
        self.iter().next()
    }

    /// Every subset of `self`, in order of the binary counter over the
    /// members sorted by id. Panics if `self` has more than 30 members.
    pub fn subsets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        let members: Vec<Element> = self.iter().collect();
        assert!(members.len() <= 30, "subset enumeration over {} elements", members.len());
        (0u64..1 << members.len()).map(move |mask| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = Self::new();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// Serialized as the sorted list of element ids.
impl serde::Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(Element::id))
    }
}

impl<const N: usize> From<[usize; N]> for ElementSet {
    fn from(ids: [usize; N]) -> Self {
        ids.into_iter().map(Element).collect()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = Element;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(Element(self.index * WORD + bit));
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Label table for the elements of one instance.
///
/// Ids are dense and assigned in order of first registration, which is
/// also the canonical input order.
#[derive(Clone, Debug, Default)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, Element>,
}

impl GroundSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// A ground set `e0, e1, ..., e{n-1}`.
    pub fn numbered(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.intern(&format!("e{i}"));
        }
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Returns the element for `label`, registering it if new.
    pub fn intern(&mut self, label: &str) -> Element {
        if let Some(&e) = self.index.get(label) {
            return e;
        }
        let e = Element(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), e);
        e
    }

    pub fn get(&self, label: &str) -> Option<Element> {
        self.index.get(label).copied()
    }

    pub fn lookup(&self, label: &str) -> Result<Element> {
        self.get(label)
            .ok_or_else(|| Error::Input(format!("unknown element `{label}`")))
    }

    pub fn label(&self, e: Element) -> &str {
        self.labels.get(e.0).map(String::as_str).unwrap_or("?")
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.labels.len()).map(Element)
    }

    /// Space-separated labels of `set`, in id order.
    pub fn format_set(&self, set: &ElementSet) -> String {
        set.iter().map(|e| self.label(e)).collect::<Vec<_>>().join(" ")
    }

    /// Parses a comma- or whitespace-separated list of known labels.
    pub fn parse_set(&self, text: &str) -> Result<ElementSet> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| self.lookup(t))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimmed_equality() {
        let mut a = ElementSet::from([1, 100]);
        a.remove(Element(100));
        assert_eq!(a, ElementSet::from([1]));
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn set_algebra() {
        let a = ElementSet::from([0, 2, 65]);
        let b = ElementSet::from([2, 3]);
        assert_eq!(a.union(&b), ElementSet::from([0, 2, 3, 65]));
        assert_eq!(a.intersection(&b), ElementSet::from([2]));
        assert_eq!(a.difference(&b), ElementSet::from([0, 65]));
        assert_eq!(a.symmetric_difference(&b), ElementSet::from([0, 3, 65]));
        assert!(ElementSet::from([2]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(ElementSet::from([1, 64]).is_disjoint(&a));
        assert_eq!(a.iter().map(Element::id).collect::<Vec<_>>(), vec![0, 2, 65]);
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s = ElementSet::from([1, 4, 7]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(&s)));
    }

    #[test]
    fn ground_set_labels() {
        let mut g = GroundSet::new();
        let a = g.intern("a");
        let b = g.intern("b");
        assert_eq!(g.intern("a"), a);
        assert_eq!(g.parse_set("b, a").unwrap(), ElementSet::from_iter([a, b]));
        assert!(g.parse_set("c").is_err());
        assert_eq!(g.format_set(&ElementSet::from_iter([b, a])), "a b");
    }
}
