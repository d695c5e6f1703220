//! Normality testing and classification of Toeplitz matrices.
//!
//! A normal Toeplitz matrix is always of type I (upper diagonals are a unit
//! multiple of the conjugated lower diagonals) or of type II (a unit multiple
//! of the reversed lower diagonals); a real one is symmetric, skew-symmetric,
//! circulant or skew-circulant up to its main diagonal. This crate decides
//! normality with an `O(N^2)` element-wise test, cross-checks it against the
//! dense commutator, extracts classification witnesses along two independent
//! routes, and verifies the underlying polynomial identities exactly.

pub mod classify;
pub mod cli;
pub mod error;
pub mod genlab;
pub mod normality;
pub mod polyid;
pub mod scalar;
pub mod toeplitz;

pub use error::{Error, Result};
pub use scalar::{ExactComplex, Magnitude, Mode, Scalar, ScalarPolicy};
pub use toeplitz::{DenseMatrix, ToeplitzSpec};
