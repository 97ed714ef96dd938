//! Edge ideals of unmixed bipartite graphs: classification, regularity,
//! depth and projective dimension from the associated directed graph,
//! generators up to radical from plane embeddings, and brute-force
//! algebraic oracles to check them against.

pub mod digraph;
pub mod embedding;
pub mod error;
pub mod generate;
pub mod graph;
pub mod invariants;
pub mod matching;
pub mod oracle;
pub mod stci;
pub mod suite;

pub use error::{Error, Result};
