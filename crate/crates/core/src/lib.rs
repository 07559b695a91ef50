//! Exact divisor-class calculus on moduli spaces of weighted pointed
//! rational curves.
//!
//! Everything is computed in exact rational arithmetic: tautological
//! divisor classes on `M_{0,n}`, on its weighted compactifications, and on
//! GIT quotients of point configurations on the line; intersection numbers
//! with F-curves; transport of classes along reduction and replacement
//! morphisms; F-nefness certificates; and exact LP certificates for
//! membership in finitely generated cones of divisor classes.
//!
//! Module map:
//! - [`markings`]: weight vectors, boundary subsets, the light/heavy
//!   trichotomy.
//! - [`picard`]: divisor classes in tautological generators, aggregates,
//!   standard relations, equality via F-curve fingerprints.
//! - [`fcurves`]: F-curve enumeration and the intersection pairing.
//! - [`morphisms`]: pullback/pushforward along reduction maps, replacement
//!   pullback, discrepancy coefficients.
//! - [`divisors`]: the named divisor classes `A`, `B`, `C_i`, `K`, the
//!   upstairs log-canonical class and the GIT polarization pullback.
//! - [`gitcalc`]: square-free symbolic intersection calculus on
//!   `(P^1)^n x P^1` and the GIT descent report.
//! - [`cones`]: F-nef certificates and exact cone-membership LP.
//! - [`lp`], [`linalg`]: exact simplex and fraction-free rank.
//! - [`sample`]: seeded random weight vectors, splits and classes for the
//!   verification suites.

pub mod cones;
pub mod divisors;
pub mod error;
pub mod fcurves;
pub mod gitcalc;
pub mod linalg;
pub mod lp;
pub mod markings;
pub mod morphisms;
pub mod picard;
mod rat;
pub mod sample;

pub use error::Error;
pub use rat::{parse_rat, rat, rat_int};

/// The scalar type of the whole crate: arbitrary-precision rationals.
/// No floating point is used anywhere.
pub type Rat = num_rational::BigRational;

pub type Result<T> = std::result::Result<T, Error>;
