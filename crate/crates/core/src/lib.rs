//! Exact-arithmetic habitats for infinitesimals.
//!
//! - [`lc`]: a computable non-Archimedean ordered field over `ℚ`.
//! - [`seq`]: the sequence algebra `ℚ^ℕ` restricted to piecewise rational
//!   functions of the index.
//! - [`monoid`]: ordered monoid instances, Archimedean conditions and the
//!   construction of disjoint cyclic subgroups in non-Archimedean monoids.
//! - [`hyperspace`]: disjointness up to idempotents, family certificates and
//!   finite magma scans.
//! - [`expr`]: the expression language used by the command-line front-end.

pub mod expr;
pub mod hyperspace;
pub mod json;
pub mod lc;
pub mod monoid;
pub mod poly;
pub mod seq;

pub use num_bigint::{BigInt, BigUint};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
