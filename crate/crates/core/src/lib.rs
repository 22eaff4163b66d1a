//! Construction, search and exact verification of orthogonal and nearly
//! orthogonal Latin hypercube designs.
//!
//! All designs are stored in doubled units (twice the true level), so every
//! check is exact integer arithmetic.

pub mod design;
pub mod error;
pub mod existence;
pub mod kronecker;
pub mod metrics;
pub mod propagation;
pub mod search;
pub mod seeds;
pub mod stacking;

pub use design::{DesignMatrix, Recipe, SignMatrix, StackMethod};
pub use error::{Clause, Error, Result};
