//! Temporal-mode analysis of Fock states heralded by photon detectors with
//! finite time resolution.
//!
//! A continuous-wave two-mode squeezed source emits photon pairs whose
//! correlation amplitude is the two-sided exponential `exp(-γ|t|/2)`,
//! `γ = 4πΔf`. Detecting one (or two coincident) idler photons with a
//! detector whose timing response `g(t)` has width `Δt` leaves the signal in a
//! mixture of temporal modes. Everything depends only on `B = Δf·Δt`; all
//! times here are in units of `1/Δf`.
//!
//! * [`temporal`]: grid, source and jitter kernels, discrete modes
//! * [`herald`]: single-photon heralded kernel, closed forms and quadrature
//! * [`modes`]: eigen-decomposition, purity, fidelity
//! * [`two_photon`]: coincidence-heralded two-photon state and its oracle
//! * [`experiment`]: sweeps, presets, CSV/JSON output, validation
//!
//! ```
//! use heralded_modes::{herald::build_kernel1, modes::decompose, temporal::*};
//!
//! let grid = TimeGrid::new(10.0, 200).unwrap();
//! let kernel = build_kernel1(grid, JitterShape::Gaussian, 0.05, 0.0).unwrap();
//! let d = decompose(&kernel).unwrap();
//! assert!(d.fidelity() > 0.9);
//! ```

pub mod error;
pub mod experiment;
pub mod herald;
pub mod modes;
pub mod special;
pub mod temporal;
pub mod two_photon;

pub use error::{Error, Result};
