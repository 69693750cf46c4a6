//! Function-field side of the workspace: dense polynomials over prime
//! fields F_p, irreducible enumeration, Dirichlet characters mod 𝔪,
//! exact L-functions as polynomials in u = q^(−s), the local Euler
//! products 𝓜_k(s,χ), and the degree-bounded summatory of the
//! polynomial irrational factor ∏|P_i|^{β_i}.
//!
//! The enumeration kernels walk factorizations directly over a sorted
//! irreducible table, so every monic polynomial is visited exactly once
//! with its factorization in hand; partial results combine in a fixed
//! branch order regardless of thread count.

pub mod characters;
pub mod dd;
pub mod irreducible;
pub mod lfunc;
pub mod poly;
pub mod summatory;
pub mod useries;

pub use biaslab_core::error::{Error, Result};
