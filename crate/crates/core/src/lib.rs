//! Exact spectrahedral representations of the hyperbolicity cones of
//! elementary symmetric polynomials.
//!
//! The library builds, for parameters `(n, k)`, an integer symmetric pencil
//! `B_1, ..., B_n` whose positive-semidefiniteness locus is exactly the
//! hyperbolicity cone of `e_{k+1}(x_1, ..., x_n)` with respect to the
//! all-ones vector. Everything is computed over arbitrary-precision
//! rationals: graph construction, weighted Laplacians, determinants,
//! PSD certificates, and the cone-membership oracles used to cross-check
//! the construction.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod util;
pub mod verify;

pub mod export;

pub use error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
