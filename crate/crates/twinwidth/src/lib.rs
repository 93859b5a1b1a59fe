//! Twin-width 1 recognition with certifying contraction sequences.
//!
//! The library decides whether a graph has twin-width at most 1 and, when it
//! does, produces a 1-contraction sequence that an independent verifier
//! accepts. Distance-hereditary graphs are classified into twin-width 0, 1,
//! or 2 with certificates. An exhaustive oracle cross-validates everything on
//! small instances.
//!
//! All types are value-semantic and operations are pure functions, so
//! concurrent use on distinct inputs is safe.

pub mod dh;
pub mod formats;
pub mod gen;
pub mod graph;
pub mod modular;
pub mod oracle;
pub mod permgraph;
pub mod tww1;
pub mod sequence;
pub mod trigraph;

pub use graph::{Graph, GraphError, InducedSubgraph};
pub use sequence::{verify_sequence, ContractionSequence, SequenceError, VerifyReport};
pub use trigraph::{EdgeKind, Trigraph, TrigraphError};
