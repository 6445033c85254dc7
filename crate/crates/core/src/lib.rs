//! Numerical laboratory for generalized adiabatic quantum search.
//!
//! The Hamiltonian H(t) = f(t)·H₀ + g(t)·H₁ interpolates between a projector
//! whose ground state is the uniform superposition and one whose ground state
//! is the marked item. The crate provides:
//!
//! - [`model`]: the interpolation-path family and closed-form spectral data,
//! - [`numerics`]: adaptive quadrature, embedded Runge-Kutta with dense
//!   output, and monotone tables,
//! - [`scheduler`]: locally adiabatic schedule synthesis and minimum run
//!   times,
//! - [`dynamics`]: the exact reduced two-level evolution,
//! - [`oracle`]: the brute-force full-Hilbert-space verifier,
//! - [`bounds`]: oracle-action accounting and the overlap-sum inequality
//!   audit,
//! - [`cli`]: the deterministic command-line front end.
//!
//! Units: ħ = 1; time and inverse energy share one dimensionless unit.

pub mod bounds;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod scheduler;

pub use error::{Error, Result};
