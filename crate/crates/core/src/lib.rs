//! Gradient echo memory and gradient frequency comb models.
//!
//! The crate is split into special functions ([`specfun`]), exact memory
//! solutions ([`gem`]), comb transfer functions and echo expansions
//! ([`gfc`]), a space-time integrator ([`simulator`]) and figures of merit
//! ([`metrics`]). Units are normalized; by convention the storage window
//! `T` and the medium length `L` are 1 for memories and the comb period
//! `T0` and tooth thickness `d` are 1 for combs.

pub mod error;
pub mod gem;
pub mod gfc;
pub mod grid;
pub mod metrics;
pub mod par;
pub mod simulator;
pub mod specfun;

pub use error::{Error, Result};
pub use grid::{Lattice, Waveform};
pub use num_complex::Complex64;
pub use specfun::EvalControl;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
