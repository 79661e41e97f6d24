//! Linear triple systems and the crown.
//!
//! A crown is a base edge together with three pairwise disjoint jewel edges,
//! each meeting the base. This crate detects crowns through rainbow matchings
//! in colored link graphs, classifies the crown-free link graphs of
//! `<4,4,4>` edges, builds reference constructions, audits the counting
//! argument that bounds crown-free systems by `3n/2` under degree-vector
//! restrictions, and computes small linear Turán numbers by isomorph-free
//! search.

pub mod analysis;
pub mod canon;
pub mod catalog;
pub mod constructions;
pub mod graph;
pub mod links;
pub mod search;
pub mod verify;

pub use canon::CanonicalCode;
pub use graph::{DegreeVector, GraphError, LinearThreeGraph, Triple, VertexId, MAX_VERTICES};
