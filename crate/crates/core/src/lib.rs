//! Numerics for Kloosterman sums, modular hyperbolas, bilinear forms and
//! the Harman-sieve exponent for the largest prime factor of n² + 1.

mod error;
pub mod fmt;
pub mod par;

pub mod approx;
pub mod arith;
pub mod bilinear;
pub mod gpf;
pub mod harman;
pub mod hyperbola;
pub mod oracle;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
