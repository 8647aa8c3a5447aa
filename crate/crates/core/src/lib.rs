//! Riordan groups `R(K) = H(K) ⋊ N(K)` over a prime field F_p or over ℤ.
//!
//! * [`series`]: truncated power series, inversion, substitution.
//! * [`riordan`]: the group law on pairs `(h, g)` and the Riordan array `A(h, g)`.
//! * [`quotients`]: the finite p-groups `R(F_p)/R^n`, subgroup closure, commutator
//!   subgroups, lower central series, generation checks.
//! * [`index`]: index-subgroups `R(I, J)`, densities and Hausdorff dimensions.

pub mod error;
pub mod index;
pub mod quotients;
pub mod riordan;
pub mod series;

pub use error::{Error, Result};
