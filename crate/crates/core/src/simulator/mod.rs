//! Space-time integration of the Maxwell–Bloch equations
//!
//! ```text
//! ∂a/∂z = ρ P,    ∂P/∂t = −(γ − iΔ(z, t)) P − |g|²N a,
//! ```
//!
//! for the field `a` and polarization `P = g* N S`. Each time step
//! integrates the polarization exactly for the detuning and decay, with
//! the field linear over the step (exponential trapezoid rule). The field
//! is marched in `z` by the trapezoid rule. The coupling at each node is
//! implicit and linear, so it is solved directly while marching.
//! Both rules are second order.

mod core;
mod gem;
mod gfc;

use serde::{Deserialize, Serialize};

pub use self::core::EnergyBudget;
pub use gem::{simulate_gem, GemRun};
pub use gfc::{simulate_gfc, GfcRun};

use crate::error::{invalid, Result};

/// Time grid and spatial resolution. `nz` is the number of nodes across
/// the memory, or across each comb tooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimGrid {
    pub nz: usize,
    pub nt: usize,
    pub t_start: f64,
    pub t_end: f64,
}

impl SimGrid {
    pub fn new(nz: usize, nt: usize, t_start: f64, t_end: f64) -> Result<Self> {
        let g = Self { nz, nt, t_start, t_end };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.nz < 2 || self.nt < 2 {
            return invalid("simulation grid needs at least two nodes per axis");
        }
        if !(self.t_end > self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return invalid("simulation time span must be positive and finite");
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.nt - 1) as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t_start + n as f64 * self.dt()
    }

    /// Same span with `factor` times finer steps in both axes.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            nz: (self.nz - 1) * factor + 1,
            nt: (self.nt - 1) * factor + 1,
            ..*self
        }
    }
}

/// Frame in which the polarization is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    /// Polarization `P` with the detuning in its equation.
    #[default]
    Lab,
    /// Phase-removed `σ = P e^{−iφ}`, `φ = Δ t`, with the phase moved into
    /// the couplings.
    Rotating,
}

/// What to keep from a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub gauge: Gauge,
    /// Record the field and polarization every `record_stride` steps;
    /// zero disables recording.
    pub record_stride: usize,
    /// Abort when stored plus emitted energy exceeds this multiple of the
    /// injected energy.
    pub divergence_ratio: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { gauge: Gauge::Lab, record_stride: 1, divergence_ratio: 1.5 }
    }
}

impl SimOptions {
    pub fn unrecorded() -> Self {
        Self { record_stride: 0, ..Self::default() }
    }
}
