use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Each tooth carries the gradient, `Δ = βz`.
    Discontinuous,
    /// Each tooth is flat at `Δ = m δω`.
    Stepwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GfcParams {
    pub variant: Variant,
    /// Number of teeth `M`, odd.
    pub teeth: usize,
    /// Tooth thickness `d`.
    pub thickness: f64,
    /// Tooth spacing `l0`.
    pub spacing: f64,
    /// Tooth frequency spacing `δω`.
    pub delta_omega: f64,
    pub gamma: f64,
    /// Coupling `|g|² N`.
    pub g_n2: f64,
}

impl GfcParams {
    /// Comb in units `T0 = d = 1` from the finesse `𝓕 = δω/2γ`
    /// (infinite for no decay), the geometric finesse `𝓕' = l0/d` and the
    /// tooth optical thickness `|g|²N d T0`.
    pub fn normalized(variant: Variant, teeth: usize, finesse: f64, finesse_geom: f64, thickness: f64) -> Self {
        let delta_omega = 2.0 * PI;
        let gamma = if finesse.is_infinite() { 0.0 } else { delta_omega / (2.0 * finesse) };
        Self { variant, teeth, thickness: 1.0, spacing: finesse_geom, delta_omega, gamma, g_n2: thickness }
    }

    /// Like [`normalized`](Self::normalized) with the optical-depth ratio
    /// `μ = |g|²N l0/δω`, so that `|g|²N d T0 = 2πμ/𝓕'`.
    pub fn from_mu(variant: Variant, teeth: usize, finesse: f64, finesse_geom: f64, mu: f64) -> Self {
        Self::normalized(variant, teeth, finesse, finesse_geom, 2.0 * PI * mu / finesse_geom)
    }

    pub fn check(&self) -> Result<()> {
        if self.teeth == 0 || self.teeth % 2 == 0 {
            return invalid(format!("tooth count must be odd, got {}", self.teeth));
        }
        let vals = [self.thickness, self.spacing, self.delta_omega, self.gamma, self.g_n2];
        if !vals.iter().all(|v| v.is_finite()) {
            return invalid("comb parameters must be finite");
        }
        if !(self.thickness > 0.0) || !(self.delta_omega > 0.0) || !(self.g_n2 > 0.0) {
            return invalid("thickness, δω and |g|²N must be positive");
        }
        if self.teeth > 1 && self.spacing < self.thickness {
            return invalid("teeth overlap: spacing is smaller than thickness");
        }
        if self.gamma < 0.0 {
            return invalid("γ must be non-negative");
        }
        Ok(())
    }

    pub fn half_count(&self) -> i64 {
        (self.teeth as i64 - 1) / 2
    }

    pub fn tooth_indices(&self) -> std::ops::RangeInclusive<i64> {
        -self.half_count()..=self.half_count()
    }

    pub fn tooth_centre(&self, m: i64) -> f64 {
        m as f64 * self.spacing
    }

    pub fn tooth_span(&self, m: i64) -> (f64, f64) {
        let c = self.tooth_centre(m);
        (c - 0.5 * self.thickness, c + 0.5 * self.thickness)
    }

    /// Equivalent gradient `δω/l0`; zero spacing (a single tooth) falls
    /// back to `δω/d`.
    pub fn beta_eff(&self) -> f64 {
        let l = if self.spacing > 0.0 { self.spacing } else { self.thickness };
        self.delta_omega / l
    }

    /// Gradient inside a tooth: `β_eff` for the discontinuous comb, zero for
    /// the stepwise one.
    pub fn beta(&self) -> f64 {
        match self.variant {
            Variant::Discontinuous => self.beta_eff(),
            Variant::Stepwise => 0.0,
        }
    }

    /// Detuning of tooth `m` at position `z`.
    pub fn detuning(&self, m: i64, z: f64) -> f64 {
        match self.variant {
            Variant::Discontinuous => {
                let (lo, hi) = self.tooth_span(m);
                self.beta_eff() * z.clamp(lo, hi)
            }
            Variant::Stepwise => m as f64 * self.delta_omega,
        }
    }

    /// `L = (M − 1) l0 + d`.
    pub fn length(&self) -> f64 {
        (self.teeth - 1) as f64 * self.spacing + self.thickness
    }

    /// `T0 = 2π/δω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.delta_omega
    }

    /// `μ = |g|²N / β_eff`.
    pub fn mu(&self) -> f64 {
        self.g_n2 / self.beta_eff()
    }

    /// `𝓕 = δω/2γ`.
    pub fn finesse(&self) -> f64 {
        if self.gamma == 0.0 {
            f64::INFINITY
        } else {
            self.delta_omega / (2.0 * self.gamma)
        }
    }

    /// `𝓕' = l0/d`.
    pub fn finesse_geom(&self) -> f64 {
        self.spacing / self.thickness
    }

    /// Tooth optical thickness `|g|²N d T0`.
    pub fn tooth_depth(&self) -> f64 {
        self.g_n2 * self.thickness * self.period()
    }

    /// `ζ⁰_eff = (2/π)|g|²N d T0`.
    pub fn zeta_eff(&self) -> f64 {
        2.0 / PI * self.tooth_depth()
    }

    /// Spectral width `β_eff L` covered by the comb.
    pub fn bandwidth(&self) -> f64 {
        self.beta_eff() * self.length()
    }
}
