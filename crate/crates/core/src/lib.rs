//! Decomposed Richelot isogenies of genus-3 curves over small finite fields.
//!
//! A genus-3 curve (hyperelliptic or smooth plane quartic) admits a
//! completely decomposed Richelot isogeny exactly when it carries enough
//! commuting involutions of the right shape. This crate searches for those
//! involutions, builds the elliptic and genus-2 quotient curves explicitly,
//! and certifies every claimed decomposition with exact point counts: the
//! L-polynomial of the curve must factor into the L-polynomials of its
//! quotients. Everything is exact arithmetic; nothing is probabilistic
//! except where a seeded census deliberately samples random curves.

pub mod census;
pub mod curve;
pub mod decompose;
pub mod field;
pub mod forms;
pub mod involution;
pub mod matrix;
pub mod poly;
pub mod quotient;
pub mod zeta;

pub use field::{Field, FieldElem, FieldError};
