//! Kazhdan–Lusztig polynomials of maximally-clustered hexagon-avoiding
//! permutations, computed from `10*`-avoiding Deodhar masks.

pub mod census;
pub mod cluster;
pub mod error;
pub mod heap;
pub mod ideals;
pub mod hecke;
pub mod kl;
pub mod mask;
pub mod perm;
pub mod words;

pub use error::{Error, Result};
pub use perm::Permutation;
