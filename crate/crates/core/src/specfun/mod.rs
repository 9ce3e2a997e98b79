//! Special functions: complex log-gamma, Bessel `J0`/`J1`, Kummer `1F1`,
//! terminating Gauss `2F1`, the Humbert function `Φ2`, and numerical
//! inverse Laplace transforms.
//!
//! Hypergeometric functions are evaluated by convergent series near the
//! origin and by high-order Taylor continuation along the ray from the
//! origin to the argument elsewhere. The continuation integrates the
//! first-order system obtained from the holonomic differential equations,
//! so purely imaginary arguments of modulus in the hundreds stay accurate.

mod bessel;
mod gamma;
mod gauss;
mod humbert;
mod kummer;
mod laplace;
pub mod quad;
mod ray;
mod sum;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j0, bessel_j1, j1_tilde};
pub use gamma::{gamma, log_gamma, rgamma};
pub use gauss::gauss_2f1_terminating;
pub use humbert::{humbert_phi2, humbert_phi2_ray, humbert_phi2_with, Phi2Args};
pub use kummer::{kummer_1f1, kummer_1f1_ray, kummer_1f1_with};
pub use laplace::{inverse_laplace, inverse_laplace_hinted};

use crate::error::{invalid, Result};

/// Accuracy and effort limits shared by the special-function routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalControl {
    /// Relative tolerance, `> 0`.
    pub rel_tol: f64,
    /// Series term budget, at least 16.
    pub max_terms: usize,
    /// Base number of quadrature or contour nodes, at least 8.
    pub quad_points: usize,
    /// Cross-check results with a second route.
    #[serde(default)]
    pub validate: bool,
}

impl Default for EvalControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 4000, quad_points: 64, validate: false }
    }
}

impl EvalControl {
    pub fn check(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return invalid(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if self.max_terms < 16 {
            return invalid(format!("max_terms must be at least 16, got {}", self.max_terms));
        }
        if self.quad_points < 8 {
            return invalid(format!("quad_points must be at least 8, got {}", self.quad_points));
        }
        Ok(())
    }

    pub fn validating(mut self) -> Self {
        self.validate = true;
        self
    }
}

/// Evaluation strategy used for a hypergeometric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Maclaurin (single or double) series.
    Series,
    /// `Φ2` summed as a series of terminating `2F1` polynomials.
    GaussExpansion,
    /// One-dimensional Euler integral over a `1F1` integrand.
    Integral,
    /// Taylor continuation along the ray from the origin.
    Ray,
}

pub(crate) fn is_nonpositive_int(z: num_complex::Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}
