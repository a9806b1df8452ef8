//! A laboratory for the Cops and Robber pursuit game on finite simple graphs.
//!
//! The crate is organized around an exact game solver ([`solver`]) that serves
//! as ground truth for everything else: a match referee ([`engine`]),
//! constructive cop strategies with explicit cop budgets ([`strategy`]),
//! cop-number-monotone graph transformations ([`transform`]), exact tree
//! decompositions at desk scale ([`treewidth`]), and a falsification harness
//! ([`verify`]) that pits every bound against the solver on seeded corpora.

pub mod engine;
pub mod graph;
pub mod solver;
pub mod strategy;
pub mod transform;
pub mod treewidth;
pub mod verify;

pub use graph::{Graph, GraphError};
