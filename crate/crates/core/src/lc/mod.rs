//! A computable non-Archimedean ordered field.
//!
//! Elements are quotients of Puiseux polynomials in a single positive
//! infinitesimal `ε` with rational exponents and rational coefficients.
//! Equality and order are decidable; `ε` is positive and below every
//! positive rational, so `1/ε` is above every rational.

mod json;
mod number;
mod puiseux;

pub use number::{Classification, LCNumber, Valuation};
pub use puiseux::PuiseuxPoly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LcError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is infinitely large and has no standard part")]
    NotFinite,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("fractional power has no exact value in the field")]
    IrrationalPower,
    #[error("exponent does not fit in 64 bits")]
    ExponentTooLarge,
}
