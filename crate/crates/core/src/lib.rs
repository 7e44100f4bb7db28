//! Concentration operators on the Fourier-symmetric Sobolev space ℋ (norm
//! `∫|f|²(1+x²) + ∫|f̂|²(1+ξ²)`) and on the weighted Paley–Wiener space.
//!
//! The crate builds Galerkin and quadrature discretizations of the time,
//! frequency and combined concentration operators, computes their spectra,
//! and compares spectral statistics with closed-form predictions.

pub mod asymptotics;
pub mod bargmann;
pub mod error;
pub mod hermite;
pub mod kernels;
pub mod operators;
pub mod quadrature;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
