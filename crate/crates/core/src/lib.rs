//! Matroid exchange, packing/covering partitions and their graph
//! applications, with brute-force oracles for checking all of them.

pub mod element;
pub mod error;
pub mod exchange;
pub mod graph;
pub mod graph_apps;
pub mod matroid;
pub mod oracle;
pub mod order;
pub mod partition;

pub use element::{Element, ElementSet, GroundSet};
pub use error::{Error, Result};
pub use graph::Graph;
pub use matroid::{Circuit, MatroidExpr, Mode};
