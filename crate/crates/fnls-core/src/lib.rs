//! Pseudospectral numerics for coupled fractional nonlinear Schrodinger
//! systems on a periodic box.
//!
//! The crate provides, in dependency order:
//!
//! - [`grid`]: the periodic discretization, quadrature and inner products;
//! - [`fft`]: the radix-2 complex FFT every spectral operation is built on;
//! - [`fracops`]: the fractional Laplacian `(-Δ)^α` as a Fourier multiplier,
//!   the Gagliardo seminorm, and slow singular-integral cross-checks;
//! - [`functional`]: model parameters, the constrained energy, its gradient,
//!   and Gagliardo-Nirenberg diagnostics;
//! - [`groundstate`]: projected-gradient minimization of the energy on the
//!   product of L^2 spheres, with Lagrange multiplier extraction;
//! - [`dynamics`]: Strang split-step time integration of the coupled system;
//! - [`analysis`]: concentration functions, trichotomy classification, orbit
//!   distances, subadditivity scans and the stability experiment.
//!
//! Everything is `f64`, deterministic, and free of global state. The crate is
//! `no_std`-compatible (with `alloc`); the companion `fnls-cli` crate carries
//! IO, file formats and the experiment runner.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod fft;
pub mod fracops;
pub mod functional;
pub mod grid;
pub mod groundstate;
pub mod quad;
pub mod rng;
pub mod special;

pub use error::CoreError;
pub use grid::{Field, Grid};

/// Complex scalar used throughout.
pub type Complex64 = num_complex::Complex<f64>;

/// Shorthand result type.
pub type Result<T> = core::result::Result<T, CoreError>;
