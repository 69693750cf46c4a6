//! Integer-side toolkit for the irrational factor function of order k.
//!
//! The central object is the multiplicative function with local values
//! `p^α` for exponents `α < k` and `p^(1/α)` for `α ≥ k`. This crate
//! provides the sieve infrastructure to evaluate it in bulk, the Dirichlet
//! character groups and Euler products behind its main-term constants,
//! race statistics between residue classes, and the analogous machinery
//! for ideals of imaginary quadratic fields.
//!
//! Floating-point accumulation is deterministic: every large sum runs over
//! fixed-size blocks combined in index order with Kahan compensation, so
//! results are bit-identical across runs and thread counts. The `parallel`
//! feature (on by default) distributes blocks over a rayon pool; the
//! sequential fallback uses the identical block structure.

pub mod abelian;
pub mod arith;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod euler;
pub mod quad;
pub mod race;
pub mod sum;

pub use error::{Error, Result};
