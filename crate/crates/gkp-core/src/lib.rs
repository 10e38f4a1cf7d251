//! Spectral laboratory for the generalized KP equation
//!
//! `(u_t − D_x^{2α}u_x + f(u)_x)_x + ε u_yy = 0`,
//! `f(u) = μ₁|u|^{p₁−1}u + μ₂|u|^{p₂−1}u`,
//!
//! on a periodic box: Fourier-multiplier kernels, the conserved and variational
//! functionals, ground-state solvers, exponential RK4 time stepping with
//! virial/moment tracking, and the explicit boundedness / blow-up criteria.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, configuration
//! and the command line live in the `gkp` crate.

#![no_std]

extern crate alloc;

pub mod criteria;
pub mod error;
pub mod evolution;
pub mod fft;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod ground_state;
pub mod params;
pub mod spectral;

pub use error::{Error, Result};
pub use field::Field;
pub use grid::GridSpec;
pub use num_complex::Complex64;
pub use params::PhysicalParams;
pub use spectral::Spectral;
