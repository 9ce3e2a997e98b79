use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Storage-stage parameters in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GemParams {
    /// Medium length `L`.
    pub length: f64,
    /// Storage window `T`; the input occupies `[−T, 0]`.
    pub window: f64,
    /// Coupling `|g|² N`.
    pub g_n2: f64,
    /// Gradient `β`.
    pub beta: f64,
    /// Coherence decay rate `γ`.
    pub gamma: f64,
    /// Frequency shift `ω_m`.
    pub omega_m: f64,
    /// Phase of `g`. It drops out of the polarization and the field.
    #[serde(default)]
    pub g_phase: f64,
}

impl GemParams {
    /// `L = T = 1`, no decay, no frequency shift.
    pub fn normalized(g_n2: f64, beta: f64) -> Self {
        Self { length: 1.0, window: 1.0, g_n2, beta, gamma: 0.0, omega_m: 0.0, g_phase: 0.0 }
    }

    /// Parameters from the optical-depth ratio `μ = |g|²N/β` and `βL`.
    pub fn from_mu(mu: f64, beta_l: f64) -> Self {
        Self::normalized(mu * beta_l, beta_l)
    }

    /// `μ = |g|² N / β`, infinite for a flat medium.
    pub fn mu(&self) -> f64 {
        if self.beta == 0.0 {
            f64::INFINITY
        } else {
            self.g_n2 / self.beta
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_omega_m(mut self, omega_m: f64) -> Self {
        self.omega_m = omega_m;
        self
    }

    /// Frequency shift that centres the storage band on the input
    /// carrier at the exit, `ω_m = βL/2`.
    pub fn centred(mut self) -> Self {
        self.omega_m = 0.5 * self.beta * self.length;
        self
    }

    pub fn check(&self) -> Result<()> {
        let finite = [self.length, self.window, self.g_n2, self.beta, self.gamma, self.omega_m, self.g_phase]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return invalid("memory parameters must be finite");
        }
        if !(self.length > 0.0) || !(self.window > 0.0) {
            return invalid("length and window must be positive");
        }
        if !(self.g_n2 > 0.0) {
            return invalid("|g|²N must be positive");
        }
        if self.gamma < 0.0 {
            return invalid("γ must be non-negative");
        }
        Ok(())
    }

    pub(crate) fn need_gradient(&self) -> Result<()> {
        if self.beta == 0.0 {
            return invalid("this solution needs a non-zero gradient β");
        }
        Ok(())
    }
}

/// Retrieval-stage parameters. The coupling constant `g` is unchanged;
/// `g_n2` reflects a new density `N'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalParams {
    pub beta: f64,
    pub omega_m: f64,
    pub g_n2: f64,
}

impl RetrievalParams {
    /// Reversed gradient, same coupling and the mirrored shift `−ω_m`.
    pub fn symmetric(p: &GemParams) -> Self {
        Self { beta: -p.beta, omega_m: -p.omega_m, g_n2: p.g_n2 }
    }

    /// Same gradient and shift as storage: nothing switches at `t = 0`.
    pub fn continued(p: &GemParams) -> Self {
        Self { beta: p.beta, omega_m: p.omega_m, g_n2: p.g_n2 }
    }

    pub fn mu(&self) -> f64 {
        if self.beta == 0.0 {
            f64::INFINITY
        } else {
            self.g_n2 / self.beta
        }
    }

    pub fn check(&self) -> Result<()> {
        if ![self.beta, self.omega_m, self.g_n2].iter().all(|v| v.is_finite()) {
            return invalid("retrieval parameters must be finite");
        }
        if !(self.g_n2 > 0.0) {
            return invalid("retrieval |g|²N' must be positive");
        }
        Ok(())
    }

    /// Density ratio `N'/N`.
    pub fn density_ratio(&self, p: &GemParams) -> f64 {
        self.g_n2 / p.g_n2
    }

    pub fn is_symmetric(&self, p: &GemParams) -> bool {
        let tol = 1e-12 * (1.0 + p.beta.abs() + p.g_n2.abs());
        (self.beta + p.beta).abs() <= tol && (self.g_n2 - p.g_n2).abs() <= tol
    }
}
