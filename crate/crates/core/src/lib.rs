//! Fixed-point model of the cohomology of smooth projective toric varieties.
//!
//! Given a simple smooth lattice polytope and a generic one-parameter
//! subgroup `γ`, the crate computes the functions `f_ρ` on the torus-fixed
//! points, the filtration they generate on the ring of functions `A(Z)`, its
//! associated graded ring, Morse indices, and the piecewise-polynomial
//! presentation on the normal fan, and checks all of these against each other
//! in exact rational arithmetic.

pub mod brion;
pub mod error;
pub mod exactnum;
pub mod fixedpoints;
pub mod graded;
pub mod monomial;
pub mod polytope;

pub use error::{Error, Result};
