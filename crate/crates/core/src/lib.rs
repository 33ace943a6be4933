//! Integers with simultaneously restricted digit expansions in several bases.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! * [`numeral`]: positional expansions, digit-set predicates, Kummer carries.
//! * [`search`]: pruned digit-tree enumeration of restricted-digit integers,
//!   resumable through [`search::SearchCheckpoint`].
//! * [`sequence`]: the block counts of the base-3&4 binary-digit system, their
//!   exponent profile, and certified slope classification.
//! * [`cantor`]: exact rational covers of Cantor-type sets and the windows of
//!   slopes avoided by their products.
//! * [`graham`]: central binomial coefficients coprime to products of odd primes.
//! * [`special`]: the digit-special census and its rough estimator.
//! * [`constants`]: dimension budgets and related certified constants.
//! * [`certified`]: directed-rounding interval arithmetic used by all of the above.
//!
//! IO, threading and file formats live in the `polybase-cli` companion crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cantor;
pub mod certified;
pub mod constants;
mod error;
pub mod graham;
pub mod joint;
pub mod numeral;
pub mod search;
pub mod sequence;
pub mod special;

pub use error::{Error, Result};
pub use numeral::{ConstraintSystem, DigitConstraint, DigitVector, Natural};
