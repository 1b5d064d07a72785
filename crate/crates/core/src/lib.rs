//! Exact construction, iteration and certification of degree-2 polynomial
//! maps on projective space over the rationals.
//!
//! Everything in this crate is pure and allocation-backed; there is no IO.
//! The `projdyn` crate layers file formats, fixtures and the CLI on top.
//!
//! Layout:
//! * [`rational`], [`monomial`], [`form`], [`map`], [`point`]: the data model.
//! * [`orbits`]: forward iteration, cycle detection and period certificates.
//! * [`constructor`]: orbit forcing, i.e. solving for coefficients so that
//!   `[0, ..., 0, 1]` has a prescribed primitive period.
//! * [`morphism_cert`]: Macaulay-matrix rank test for "no common zero".
//! * [`products`]: splicing two maps so that periods combine by lcm.
//! * [`planner`]: choosing block dimensions and periods to maximize the lcm.

#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructor;
pub mod error;
pub mod form;
pub mod linalg;
pub mod map;
pub mod monomial;
pub mod morphism_cert;
pub mod orbits;
pub mod planner;
pub mod point;
pub mod products;
pub mod rational;

pub use error::{Error, Result};
pub use form::HomogeneousForm;
pub use map::{AffineMapRecord, AffinePolynomial, PolynomialMap};
pub use monomial::Monomial;
pub use point::ProjectivePoint;
pub use rational::Rational;
