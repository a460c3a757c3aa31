//! Vector-colorings of simple polytopes, their quotient spaces N(P, Λ),
//! Hamiltonian subcomplexes and hyperelliptic involutions.

pub mod catalog;
pub mod coloring;
pub mod complex;
pub mod error;
pub mod gf2;
pub mod hamiltonian;
pub mod homology;
pub mod polytope;

pub use error::{Error, Result};
