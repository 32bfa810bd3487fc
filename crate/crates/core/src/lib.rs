//! Exact continued fractions on the Heisenberg group.
//!
//! The Heisenberg group is taken in its Siegel model, the quadric
//! |u|^2 - 2 Re(v) = 0 in C^2, with integer points S(Z) as the digit
//! lattice. This crate provides:
//!
//! - exact scalars: Gaussian integers/rationals, certified complex balls,
//!   and number-field elements of degree at most 3 over Q(i) (`gaussian`,
//!   `numfield`);
//! - the group itself: planar and projective points, the group law, the
//!   Koranyi inversion, the gauge norm and distance (`siegel`);
//! - nearest-lattice-point reduction into the Dirichlet fundamental domain
//!   (`lattice`);
//! - the matrix group U(2,1;Z[i]) acting by linear fractional
//!   transformations, with word decomposition into inversion, translation,
//!   and rotation generators (`unitary`);
//! - the continued fraction engine: Gauss map, digit expansion,
//!   convergents, exact periodicity detection, and the two constructions
//!   linking eventually periodic expansions to fixed points of non-torsion
//!   unitary matrices (`cf`).
//!
//! Everything numeric is either exact or a certified enclosure; decisions
//! that cannot be settled are reported as errors, never guessed.

pub mod cf;
pub mod corpus;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod numfield;
pub mod scalar;
pub mod selftest;
pub mod siegel;
pub mod unitary;

pub use error::{Error, Result};
