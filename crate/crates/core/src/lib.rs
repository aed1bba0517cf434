//! Multilevel graph algorithms: size-constrained label propagation,
//! k-way partitioning with a multilevel combine operator, flow-based
//! node separators, split-and-connect edge partitioning, top-down
//! process mapping, and a deterministic Barabási–Albert generator.

pub mod bagen;
pub mod error;
pub mod flow;
pub mod graph;
pub mod io;
pub mod mapping;
pub mod multilevel;
pub mod sclap;
pub mod separator;
pub mod spac;

#[cfg(test)]
pub(crate) mod testgraphs;

pub use error::{Error, Result};
pub use graph::{Graph, Partition, Weight};
