//! Numerical factorization of loops in SU(2).
//!
//! The crate works with loops `g: S^1 -> SU(2)` given by finitely many
//! Fourier coefficients. It computes Birkhoff and triangular factorizations
//! through block Toeplitz truncations, converts between loops and their
//! root-subgroup coordinates, and evaluates the combinatorial expansions that
//! relate those coordinates.

// `!(x > tol)` rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinat;
pub mod error;
pub mod factor;
pub mod laurent;
pub mod random;
pub mod rootsub;
pub mod toeplitz;

pub use error::{Error, Result};
