//! zlab: exact desk-scale computations around Zimmert sets and sifted
//! quadratic character sums for imaginary quadratic fields.
//!
//! The library enumerates Zimmert sets (whose size lower-bounds the rank of
//! the largest free quotient of the associated Bianchi group), evaluates the
//! quadratic character chi mod 4|d| and its partial and sifted sums, checks
//! the exact decomposition of a sifted sum into its two Moebius-weighted
//! pieces, evaluates Burgess-type reference magnitudes under the
//! admissible-shift rule, and verifies the inequality
//! pi(x) - |Z_d| - omega(|d|) <= S exactly for ranges of discriminants.
//!
//! Everything that can be an integer is an integer: sums, decompositions,
//! and set sizes are exact, and the test suite asserts the identities with
//! zero tolerance. Bound formulas are reference magnitudes only, since their
//! implied constants are not explicit.

pub mod arith;
pub mod character;
mod error;
pub mod sift;
pub mod survey;
pub mod zimmert;

pub use error::{Error, Result};
