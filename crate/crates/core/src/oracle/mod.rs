//! Independent ground truth: monomial ideals, Hochster's formula and an
//! exact Gröbner engine.

pub mod groebner;
pub mod homology;
pub mod monomial;
pub mod poly;
pub mod verify;

pub use homology::Field;
