//! Shared inputs for the benchmarks.

use fo_csp::generate::random_structure;
use fo_csp::{Signature, Structure};

/// A random digraph with arc density `density`.
pub fn random_digraph(size: usize, density: f64, seed: u64) -> Structure {
    random_structure(&Signature::digraph(), size, &[density], seed).expect("valid parameters")
}
