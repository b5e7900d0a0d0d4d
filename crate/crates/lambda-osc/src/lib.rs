//! Deformed nonlinear oscillator with position-dependent mass.
//!
//! Classical one- and two-dimensional models and their first integrals,
//! numerical flows, separable charts, the exactly solvable quantum problems
//! and an independent finite-difference spectral oracle.

pub mod classical;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod ktrig;
pub mod oracle;
pub mod quantum1d;
pub mod quantum2d;
pub mod separability;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
