//! Exact computation, bounding and verification of the p-adic valuation of
//! the resultant of two monic integer polynomials.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`] and [`resultant`]: exact integer polynomial arithmetic and the
//!   Sylvester/Bareiss resultant.
//! - [`padic`]: valuations, Newton polygons, root-valuation profiles and the
//!   characteristic functions built on them.
//! - [`invariants`]: the guaranteed valuations `s1`, `s2`, the joint maximum
//!   `S` and the characteristic double-sum lower bound.
//! - [`resolution`] and [`bounds`]: minimal resolutions of a weight and every
//!   lower bound derived from them.
//! - [`tree`]: weight functions on truncated p-ary trees.
//! - [`construct`]: polynomial pairs on which the bounds are attained.
//! - [`harness`]: instance generation and the table-driven invariant checker.

pub mod bounds;
pub mod construct;
pub mod error;
pub mod harness;
pub mod invariants;
pub mod padic;
pub mod poly;
pub mod resolution;
pub mod resultant;
mod serde_util;
pub mod tree;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use padic::Prime;
pub use poly::Polynomial;
