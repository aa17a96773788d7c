//! Exact computations with equivariant exceptional collections on projective
//! space: cyclotomic arithmetic, finite matrix groups and their
//! representations, Hom complexes of equivariant line bundles, mutations and
//! Veronese block decompositions.

pub mod cohomology;
pub mod collection;
pub mod complex;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod numbers;
pub mod rep;

pub use error::{Error, Result};
