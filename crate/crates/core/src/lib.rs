//! Momenta of separable Helmholtz waves through their Fourier spectra.
//!
//! The crate evaluates plane, Bessel and Mathieu waves, samples them on
//! transverse grids, extracts their angular spectrum on the cone of
//! transverse wavevectors, projects that spectrum onto topological charges,
//! and forms mean momenta either spectrally or with finite-difference
//! operators on the grid.

pub mod cli;
pub mod error;
pub mod fieldio;
pub mod momenta;
pub mod specfun;
pub mod spectral;
pub mod waves;

pub use error::{HwmError, Result};
pub use num_complex;
