//! Positive-definite Riemann–Hilbert (Wiener–Hopf) factorization on the real
//! line by sampling and spectral methods, with an application to the extrema
//! of killed Lévy processes.

pub mod additive;
pub mod cli;
pub mod error;
pub mod extrema;
pub mod grid;
pub mod levy;
pub mod mc;
pub mod multiplicative;
pub mod posdef;
pub(crate) mod quad;

pub use error::{Error, Result};
