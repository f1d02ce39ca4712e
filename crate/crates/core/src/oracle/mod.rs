//! Ground truth for the algorithms: exhaustive verifiers that only chase
//! definitions through rank and span, matroid-axiom checking, and seeded
//! instance generators.
//!
//! Nothing here calls the exchange or partition algorithms.

mod axioms;
pub mod brute;
pub mod fixtures;
pub mod gen;
mod verify;

use std::fmt;

use serde::Serialize;

pub use axioms::{check_axioms, check_rank_function, FnOracle, IndependenceOracle, AXIOM_LIMIT};
pub use verify::{
    Names,
    is_strongly_maximal_bruteforce, verify_family_cb, verify_kl, verify_partition, verify_paths, verify_sets,
    SM_LIMIT,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub witness: String,
}

/// Outcome of a verifier. Passes iff no violation was recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl Default for Verdict {
    fn default() -> Self {
        Self {
            pass: true,
            violations: Vec::new(),
        }
    }
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, condition: impl Into<String>, witness: impl Into<String>) {
        self.pass = false;
        self.violations.push(Violation {
            condition: condition.into(),
            witness: witness.into(),
        });
    }

    /// Records a violation of `condition` unless `ok`.
    pub fn require(&mut self, condition: &str, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.push(condition, witness());
        }
    }

    pub fn merge(&mut self, other: Verdict) {
        for v in other.violations {
            self.push(v.condition, v.witness);
        }
    }

    pub fn fails(&self, condition: &str) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            return writeln!(f, "verdict: pass");
        }
        writeln!(f, "verdict: fail")?;
        for v in &self.violations {
            writeln!(f, "violation {}: {}", v.condition, v.witness)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_passes_iff_empty() {
        let mut v = Verdict::new();
        assert!(v.pass);
        v.require("x", true, || unreachable!());
        assert!(v.pass);
        v.require("y", false, || "w".into());
        assert!(!v.pass && v.fails("y"));
        assert_eq!(v.to_string(), "verdict: fail\nviolation y: w\n");
    }
}
