//! Temperley-Lieb immanants and %-immanants of permutations, in exact arithmetic.
//!
//! - [`perm`]: permutations, patterns, Bruhat order, block structures
//! - [`tl`]: the Temperley-Lieb algebra on non-crossing matchings, `θ`, `β`, `f_w(u)`
//! - [`coloring`]: two-colorings of matching vertices and the forced-matching constructions
//! - [`immanant`]: immanants as sparse coefficient vectors, %-immanants, complementary minors
//! - [`classify`]: case classification, closed-form coefficients and decompositions
//! - [`verify`]: exhaustive checks used by the CLI and the acceptance tests

pub mod classify;
pub mod coloring;
pub mod immanant;
pub mod limits;
pub mod perm;
pub mod tl;
pub mod verify;

pub use perm::Permutation;
