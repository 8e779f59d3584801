//! Numerical verification of Harnack-type determinantal inequalities for
//! contractive matrices.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] holds the dense complex kernels (LU determinant, Jacobi and
//!   shifted-QR eigensolvers, one-sided Jacobi SVD, polar factors) and the
//!   seeded samplers for Haar unitaries and positive-semidefinite contractions.
//! * [`majorization`] checks additive and multiplicative majorization and the
//!   scalar facts the determinantal bounds rest on.
//! * [`inequalities`] evaluates each two-sided determinantal bound and
//!   reports its slack and equality classification.
//! * [`search`] is the seeded Monte-Carlo harness that stress-tests any of
//!   the bounds.

pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod majorization;
pub mod search;

pub use error::{Error, Result};
