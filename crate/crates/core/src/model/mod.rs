//! Signatures, structures, mappings and incidence-graph metrics.

mod incidence;
mod iso;
mod mapping;
mod signature;
mod structure;
mod text;

pub use incidence::{distance, is_tree, metrics, tree_decomposition, Halves, IncidenceGraph, Metrics};
pub use iso::{find_isomorphism, find_isomorphism_colored};
pub use mapping::Mapping;
pub use signature::{Signature, Symbol};
pub use structure::{is_homomorphism, Structure, TupleSet};
pub use text::{parse_structure, to_text};
