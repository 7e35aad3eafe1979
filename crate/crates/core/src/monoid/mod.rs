//! Ordered monoids, the two Archimedean conditions and the chain of
//! disjoint cyclic subgroups in non-Archimedean carriers.

pub mod archimedean;
pub mod audit;
pub mod chain;
mod element;
mod instance;

pub use element::MonoidElement;
pub use instance::{Carrier, CyclicIntersection, Fact, MonoidInstance, REGISTERED};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("element {element} does not belong to {instance}")]
    ForeignElement { instance: String, element: String },
    #[error("{0} is only partially ordered")]
    PartialOrderOnly(String),
    #[error("{0} is not in the nonnegative cone")]
    NotNonNegative(String),
    #[error("{0} has no dominator oracle")]
    OracleMissing(String),
    #[error("{0} is not linearly ordered")]
    NotLinear(String),
    #[error("{0} is the trivial monoid")]
    TrivialMonoid(String),
    #[error("{0} is not strictly positive")]
    NotPositive(String),
    #[error("unknown monoid instance {0}")]
    UnknownInstance(String),
    #[error("negative multiple of an element without an inverse")]
    NotAGroup,
}
