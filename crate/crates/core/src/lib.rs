//! Schubert and Grothendieck polynomials indexed by permutations and by words,
//! together with the combinatorial models that compute them (pipe dreams and
//! bumpless pipe dreams), integer-lattice checks in the truncated ring
//! `Z[x]/(x_i^k)`, and the matrix normal form that sorts rank-deficient
//! matrices into word-indexed cells.
//!
//! Everything is exact: polynomial coefficients are arbitrary-precision
//! integers, lattices are reduced over `Z`, and matrices live over `Q` or a
//! prime field.

#![no_std]

extern crate alloc;

pub mod bpd;
pub mod combinat;
pub mod error;
pub mod geometry;
pub mod pipedream;
pub mod poly;
pub mod rings;

pub use error::{Error, Result};
