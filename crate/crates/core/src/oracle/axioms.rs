use crate::element::{Element, ElementSet};
use crate::error::{Error, Result};
use crate::matroid::MatroidExpr;

use super::Verdict;

/// Largest ground set [`check_axioms`] will enumerate.
pub const AXIOM_LIMIT: usize = 10;

pub trait IndependenceOracle {
    fn ground(&self) -> ElementSet;
    fn is_independent(&self, x: &ElementSet) -> bool;
}

impl IndependenceOracle for MatroidExpr {
    fn ground(&self) -> ElementSet {
        MatroidExpr::ground(self).clone()
    }

    fn is_independent(&self, x: &ElementSet) -> bool {
        self.independent(x)
    }
}

/// An independence predicate given as a closure, for fixtures.
pub struct FnOracle<F> {
    pub ground: ElementSet,
    pub independent: F,
}

impl<F: Fn(&ElementSet) -> bool> IndependenceOracle for FnOracle<F> {
    fn ground(&self) -> ElementSet {
        self.ground.clone()
    }

    fn is_independent(&self, x: &ElementSet) -> bool {
        (self.independent)(x)
    }
}

struct Table {
    elems: Vec<Element>,
    indep: Vec<bool>,
}

impl Table {
    fn build(o: &dyn IndependenceOracle) -> Result<Self> {
        let ground = o.ground();
        if ground.len() > AXIOM_LIMIT {
            return Err(Error::TooLarge {
                size: ground.len(),
                limit: AXIOM_LIMIT,
            });
        }
        let elems: Vec<Element> = ground.iter().collect();
        let indep = (0..1usize << elems.len())
            .map(|mask| o.is_independent(&Self::set_of(&elems, mask)))
            .collect();
        Ok(Self { elems, indep })
    }

    fn set_of(elems: &[Element], mask: usize) -> ElementSet {
        elems
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    }

    fn set(&self, mask: usize) -> ElementSet {
        Self::set_of(&self.elems, mask)
    }

    fn n(&self) -> usize {
        self.elems.len()
    }

    fn maximal(&self, mask: usize) -> bool {
        self.indep[mask] && (0..self.n()).all(|k| mask >> k & 1 == 1 || !self.indep[mask | 1 << k])
    }

    fn circuit(&self, mask: usize) -> bool {
        !self.indep[mask] && (0..self.n()).filter(|k| mask >> k & 1 == 1).all(|k| self.indep[mask & !(1 << k)])
    }
}

/// Exhaustively checks axioms (I) `∅` independent, (II) downward closure and
/// (III) for independent `I`, `J` with `J` maximal and `I` not, some
/// `e ∈ J \ I` has `I + e` independent. Also checks base exchange and
/// strong circuit elimination over all pairs.
pub fn check_axioms(o: &dyn IndependenceOracle) -> Result<Verdict> {
    let t = Table::build(o)?;
    let n = t.n();
    let full = 1usize << n;
    let mut v = Verdict::new();

    v.require("I", t.indep[0], || "the empty set is dependent".into());

    'down: for mask in 0..full {
        if !t.indep[mask] {
            continue;
        }
        for k in 0..n {
            if mask >> k & 1 == 1 && !t.indep[mask & !(1 << k)] {
                v.push(
                    "II",
                    format!("{:?} is independent but its subset {:?} is not", t.set(mask), t.set(mask & !(1 << k))),
                );
                break 'down;
            }
        }
    }

    let maximal: Vec<usize> = (0..full).filter(|&m| t.maximal(m)).collect();
    'aug: for i in (0..full).filter(|&m| t.indep[m] && !t.maximal(m)) {
        for &j in &maximal {
            let extendable = (0..n).any(|k| j >> k & 1 == 1 && i >> k & 1 == 0 && t.indep[i | 1 << k]);
            if !extendable {
                v.push(
                    "III",
                    format!("{:?} is not maximal and no element of maximal {:?} extends it", t.set(i), t.set(j)),
                );
                break 'aug;
            }
        }
    }

    'bases: for &b1 in &maximal {
        for &b2 in &maximal {
            for x in (0..n).filter(|&k| b1 >> k & 1 == 1 && b2 >> k & 1 == 0) {
                let ok = (0..n)
                    .filter(|&k| b2 >> k & 1 == 1 && b1 >> k & 1 == 0)
                    .any(|y| t.maximal((b1 & !(1 << x)) | 1 << y));
                if !ok {
                    v.push(
                        "base-exchange",
                        format!("{:?} - {} admits no exchange from {:?}", t.set(b1), t.elems[x], t.set(b2)),
                    );
                    break 'bases;
                }
            }
        }
    }

    let circuits: Vec<usize> = (0..full).filter(|&m| t.circuit(m)).collect();
    'elim: for &c1 in &circuits {
        for &c2 in &circuits {
            let both = c1 & c2;
            if c1 == c2 || both == 0 {
                continue;
            }
            // Strong form: e ∈ C1 \ C2, f ∈ C1 ∩ C2, some circuit through e
            // inside C1 ∪ C2 - f.
            for e in (0..n).filter(|&k| c1 >> k & 1 == 1 && c2 >> k & 1 == 0) {
                for f in (0..n).filter(|&k| both >> k & 1 == 1) {
                    let pool = (c1 | c2) & !(1 << f);
                    let ok = circuits.iter().any(|&c| c & !pool == 0 && c >> e & 1 == 1);
                    if !ok {
                        v.push(
                            "circuit-elimination",
                            format!(
                                "no circuit through {} inside {:?} ∪ {:?} - {}",
                                t.elems[e],
                                t.set(c1),
                                t.set(c2),
                                t.elems[f]
                            ),
                        );
                        break 'elim;
                    }
                }
            }
        }
    }
    Ok(v)
}

/// For a matroid expression, checks that the structural rank agrees with
/// the largest independent subset on every subset of the ground set, and
/// that span agrees with its definition through rank.
pub fn check_rank_function(m: &MatroidExpr) -> Result<Verdict> {
    let t = Table::build(m)?;
    let n = t.n();
    let mut best = vec![0usize; 1 << n];
    for mask in 0..1usize << n {
        best[mask] = if t.indep[mask] {
            mask.count_ones() as usize
        } else {
            (0..n)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| best[mask & !(1 << k)])
                .max()
                .unwrap_or(0)
        };
    }
    let mut v = Verdict::new();
    for (mask, &b) in best.iter().enumerate() {
        let x = t.set(mask);
        let r = m.rank_unchecked(&x);
        if r != b {
            v.push("rank", format!("rank {r} of {x:?} but its largest independent subset has {b} elements"));
            break;
        }
        let span = m.span_unchecked(&x);
        let expected: ElementSet = t
            .elems
            .iter()
            .enumerate()
            .filter(|&(k, _)| best[mask | 1 << k] == b)
            .map(|(_, &e)| e)
            .collect();
        if span != expected {
            v.push("span", format!("span of {x:?} is {span:?}, expected {expected:?}"));
            break;
        }
    }
    Ok(v)
}
