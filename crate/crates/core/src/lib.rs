//! Certifying search for the sparse strong Erdős–Hajnal trichotomy on
//! caterpillar subdivisions.
//!
//! Given a graph G, a mass μ on its vertex subsets and a caterpillar
//! subdivision T, [`engine::run_trichotomy`] returns one of: a vertex of mass
//! at least ε, a neighbourhood of mass at least ε, two anticomplete sets both
//! of mass at least ε, or an induced copy of T. Every such answer is checked
//! by [`oracles::verify_witness`] before it is returned.

pub mod cli;
pub mod engine;
pub mod graph;
pub mod mass;
pub mod oracles;
pub mod ratio;
pub mod trees;
pub mod format;
pub mod harness;
