//! Classical simulation of variational quantum PDE solving.
//!
//! Solutions are stored as scaled ansatz states `λ₀|ψ(λ)⟩`. Finite-difference
//! operators are built from cyclic Adders and pointwise Diagonal factors, cost
//! functions are evaluated either by direct application or as sums of
//! expectation values, and a per-timestep optimizer drives the evolution.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ansatz;
pub mod circuits;
pub mod classical;
pub mod costfn;
pub mod error;
pub mod evolve;
pub mod fft;
pub mod math;
pub mod operators;
pub mod optimize;
pub mod presets;
pub mod sampling;
pub mod state;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64 as C64;
pub use state::{Grid, Grid1D, Grid2D, ParamVector, ScaledState};
