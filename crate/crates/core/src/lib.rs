//! Regularized zero-point sums between parallel conducting plates and the
//! plate-induced modification of the Lamb shift.
//!
//! Natural units are used throughout (hbar = c = 1): lengths in nm, energies
//! in inverse nm.

#![allow(clippy::excessive_precision)]

pub mod casimir;
pub mod emsum;
pub mod error;
pub mod lamb;
pub mod quad;
pub mod regseries;
pub mod special;

pub use error::{Error, Result};
