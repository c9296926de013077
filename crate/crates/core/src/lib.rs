//! Finite relational structures, surjective hyper-endomorphisms (shops) and
//! the complexity classification of model checking for fragments of
//! first-order logic.
//!
//! Elements are always `0..n-1`. Shop images are stored as `u64` bitmasks,
//! so anything that touches shops requires domains of at most 64 elements.

pub mod bits;
pub mod classifier;
pub mod cores;
mod error;
pub mod evaluator;
pub mod formulas;
pub mod gadgets;
pub mod lattice;
mod search;
pub mod shops;
pub mod structures;

pub use bits::ElemSet;
pub use error::{Error, Result};
pub use structures::{Element, Signature, Structure, Symbol};
