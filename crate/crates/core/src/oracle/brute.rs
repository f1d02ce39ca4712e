//! Exhaustive enumerations used as independent oracles in tests.

use crate::element::{Element, ElementSet};
use crate::exchange::ExchangeInstance;
use crate::graph::Graph;
use crate::graph_apps::is_matching;
use crate::matroid::MatroidExpr;

pub fn common_independent_sets(m0: &MatroidExpr, m1: &MatroidExpr) -> Vec<ElementSet> {
    m0.ground()
        .subsets()
        .filter(|x| m0.independent(x) && m1.independent(x))
        .collect()
}

pub fn max_common_size(m0: &MatroidExpr, m1: &MatroidExpr) -> usize {
    common_independent_sets(m0, m1).iter().map(ElementSet::len).max().unwrap_or(0)
}

/// Every `I` that solves the exchange instance.
pub fn kl_solutions(inst: &ExchangeInstance) -> Vec<ElementSet> {
    inst.ground()
        .subsets()
        .filter(|i| {
            inst.m0.independent(i)
                && inst.m1.independent(i)
                && inst.m0.spans_all(i, &inst.i0)
                && inst.m1.spans_all(i, &inst.i1)
        })
        .collect()
}

/// Every assignment of the elements of `ground` to `k` classes, as a list
/// of classes. `k^|ground|` results.
pub fn assignments(ground: &ElementSet, k: usize) -> Vec<Vec<ElementSet>> {
    let elems: Vec<Element> = ground.iter().collect();
    let mut out = Vec::new();
    if k == 0 {
        if elems.is_empty() {
            out.push(Vec::new());
        }
        return out;
    }
    let total = k.pow(elems.len() as u32);
    for mut code in 0..total {
        let mut classes = vec![ElementSet::new(); k];
        for &e in &elems {
            classes[code % k].insert(e);
            code /= k;
        }
        out.push(classes);
    }
    out
}

pub fn matchings(g: &Graph) -> Vec<ElementSet> {
    g.edge_set().subsets().filter(|m| is_matching(g, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_counts() {
        assert_eq!(assignments(&ElementSet::from([0, 1, 2]), 2).len(), 8);
        assert_eq!(assignments(&ElementSet::new(), 0).len(), 1);
        assert!(assignments(&ElementSet::from([0]), 0).is_empty());
    }

    #[test]
    fn uniform_pair_max() {
        let e = ElementSet::full(4);
        let a = MatroidExpr::uniform(2, e.clone());
        let b = MatroidExpr::uniform(3, e);
        assert_eq!(max_common_size(&a, &b), 2);
    }
}
