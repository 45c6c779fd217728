//! Finite relational structures, homomorphisms and first-order definable
//! constraint satisfaction.
//!
//! The crate decides whether the CSP of a finite template is first-order
//! definable by testing whether the square of its core dismantles to the
//! diagonal, and solves such CSPs by dismantling products.

pub mod construct;
pub mod decide;
pub mod dismantle;
pub mod error;
pub mod generate;
pub mod limits;
pub mod model;
pub mod solve;

pub use error::{Error, Result};
pub use limits::{CancelToken, Limits};
pub use model::{is_homomorphism, parse_structure, to_text, Mapping, Signature, Structure, TupleSet};
