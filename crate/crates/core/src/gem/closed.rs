use num_complex::Complex64;

use super::storage::field_impulse_response;
use super::{retrieval_kernel, GemParams, RetrievalParams};
use crate::error::{invalid, Result};
use crate::grid::Waveform;
use crate::specfun::{humbert_phi2, kummer_1f1, EvalControl, Phi2Args};

type C = Complex64;

/// Input `a_in(t) = e^{−γ(t − t_in)}` switched on over the whole storage
/// window `[−T, 0]`, stored with `ω_m = βL/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpDecayInput {
    pub t_in: f64,
}

impl ExpDecayInput {
    fn check(&self, p: &GemParams) -> Result<()> {
        p.check()?;
        p.need_gradient()?;
        if !(-p.window..=0.0).contains(&self.t_in) {
            return invalid("t_in must lie in [−T, 0]");
        }
        let centred = 0.5 * p.beta * p.length;
        if (p.omega_m - centred).abs() > 1e-9 * (1.0 + centred.abs()) {
            return invalid("closed form needs ω_m = βL/2");
        }
        Ok(())
    }

    pub fn input(&self, p: &GemParams, t: f64) -> C {
        if t < -p.window || t > 0.0 {
            C::new(0.0, 0.0)
        } else {
            C::new((-p.gamma * (t - self.t_in)).exp(), 0.0)
        }
    }

    /// Input sampled at `n` nodes over `[−T, 0]`.
    pub fn waveform(&self, p: &GemParams, n: usize) -> Result<Waveform> {
        Waveform::from_fn(-p.window, 0.0, n, |t| C::new((-p.gamma * (t - self.t_in)).exp(), 0.0))
    }

    /// `a(z, t) = e^{−γ(t−t_in)} 1F1(iμ; 1; iβz(t+T))` for `t ∈ [−T, 0]`.
    pub fn field(&self, p: &GemParams, z: f64, t: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        let k = kummer_1f1(C::new(0.0, p.mu()), C::new(1.0, 0.0), C::new(0.0, p.beta * z * (t + p.window)), ctl)?;
        Ok(self.input(p, t) * k)
    }

    /// Transmitted field at the exit during storage.
    pub fn storage_output(&self, p: &GemParams, t: f64, ctl: &EvalControl) -> Result<C> {
        self.field(p, p.length, t, ctl)
    }

    /// `P(z, t) = −|g|²N e^{−γ(t−t_in)} (t+T) 1F1(iμ+1; 2; iβz(t+T))`.
    pub fn coherence(&self, p: &GemParams, z: f64, t: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        let x = t + p.window;
        let k = kummer_1f1(C::new(1.0, p.mu()), C::new(2.0, 0.0), C::new(0.0, p.beta * z * x), ctl)?;
        Ok(-p.g_n2 * x * self.input(p, t) * k)
    }

    /// Echo at the exit for the reversed gradient:
    /// `e^{−γ(t−t_in)} e^{i(βL/2+ω'_m)t} [Φ2(iμ, −2iμ; 1; −iβL(t−T), −iβLt) − 1F1(−iμ; 1; −iβLt)]`.
    pub fn echo(&self, p: &GemParams, r: &RetrievalParams, t: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        if !r.is_symmetric(p) {
            return invalid("closed-form echo needs β' = −β and unchanged coupling");
        }
        let (mu, bl) = (p.mu(), p.beta * p.length);
        let phi = humbert_phi2(
            &Phi2Args::new(
                C::new(0.0, mu),
                C::new(0.0, -2.0 * mu),
                C::new(1.0, 0.0),
                C::new(0.0, -bl * (t - p.window)),
                C::new(0.0, -bl * t),
            ),
            ctl,
        )?
        .0;
        let k = kummer_1f1(C::new(0.0, -mu), C::new(1.0, 0.0), C::new(0.0, -bl * t), ctl)?;
        let pref = C::new(-p.gamma * (t - self.t_in), (0.5 * bl + r.omega_m) * t).exp();
        Ok(pref * (phi - k))
    }
}

/// Unit impulse `a_in(t) = δ(t − t_in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaInput {
    pub t_in: f64,
}

impl DeltaInput {
    fn check(&self, p: &GemParams) -> Result<()> {
        p.check()?;
        if !(-p.window..=0.0).contains(&self.t_in) {
            return invalid("t_in must lie in [−T, 0]");
        }
        Ok(())
    }

    /// Leaked field at the exit without the transmitted impulse:
    /// `−μβL e^{−i(βL/2−ω_m)(t−t_in)} e^{−γ(t−t_in)} 1F1(iμ+1; 2; iβL(t−t_in)) Θ(t−t_in)`.
    pub fn leakage(&self, p: &GemParams, t: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        field_impulse_response(p, p.length, t - self.t_in, ctl)
    }

    /// Polarization at the end of storage:
    /// `P(z, 0) = −|g|²N e^{i(βL/2−ω_m)t_in} e^{γ t_in} 1F1(iμ+1; 1; −iβ t_in z)`.
    pub fn coherence_at_switch(&self, p: &GemParams, z: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        p.need_gradient()?;
        let k = kummer_1f1(C::new(1.0, p.mu()), C::new(1.0, 0.0), C::new(0.0, -p.beta * self.t_in * z), ctl)?;
        let ph = C::new(p.gamma * self.t_in, (0.5 * p.beta * p.length - p.omega_m) * self.t_in).exp();
        Ok(-p.g_n2 * ph * k)
    }

    /// Echo at the exit for the reversed gradient, the kernel at `τ = t_in`.
    pub fn echo(&self, p: &GemParams, r: &RetrievalParams, t: f64, ctl: &EvalControl) -> Result<C> {
        self.check(p)?;
        retrieval_kernel(p, r, t, self.t_in, ctl)
    }
}
