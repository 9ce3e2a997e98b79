use num_complex::Complex64;

use super::storage::gregory_weight;
use super::{GemParams, RetrievalParams};
use crate::error::{invalid, Result};
use crate::grid::{Lattice, Waveform};
use crate::par;
use crate::specfun::{humbert_phi2, humbert_phi2_ray, EvalControl, Phi2Args};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Echo kernel at the exit for the reversed gradient `β' = −β` with
/// unchanged coupling, so that `a_out(t) = ∫ a_in(τ) K(t, τ) dτ`:
///
/// `K = −μβL e^{iβL(t+τ)/2} e^{i(ω'_m t − ω_m τ)} e^{−γ(t−τ)}
///      Φ2(iμ+1, −2iμ; 2; −iβL(t+τ), −iβLt)`.
///
/// `ω'_m` is taken from `r`, which must otherwise be symmetric.
pub fn retrieval_kernel(p: &GemParams, r: &RetrievalParams, t: f64, tau: f64, ctl: &EvalControl) -> Result<C> {
    p.check()?;
    p.need_gradient()?;
    if !r.is_symmetric(p) {
        return invalid("symmetric kernel needs β' = −β and unchanged coupling");
    }
    general_field_kernel(p, r, p.length, t, tau, ctl)
}

/// Field kernel at position `z` for general retrieval parameters:
///
/// `−|g|²N' z e^{−i(β't−βτ)L/2} e^{i(ω'_m t − ω_m τ)} e^{−γ(t−τ)}
///   Φ2(iμ+1, iμ'−iμ; 2; i(β't−βτ)z, iβ'zt)`.
pub fn general_field_kernel(
    p: &GemParams,
    r: &RetrievalParams,
    z: f64,
    t: f64,
    tau: f64,
    ctl: &EvalControl,
) -> Result<C> {
    check(p, r)?;
    let (pref, args) = field_kernel_parts(p, r, z, t, tau);
    if z == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    Ok(pref * z * humbert_phi2(&args, ctl)?.0)
}

fn check(p: &GemParams, r: &RetrievalParams) -> Result<()> {
    p.check()?;
    r.check()?;
    p.need_gradient()?;
    if r.beta == 0.0 {
        return invalid("retrieval needs a non-zero gradient β'");
    }
    Ok(())
}

// Prefactor without the factor z, and the Φ2 arguments at z.
fn field_kernel_parts(p: &GemParams, r: &RetrievalParams, z: f64, t: f64, tau: f64) -> (C, Phi2Args) {
    let (mu, mup) = (p.mu(), r.mu());
    let w = r.beta * t - p.beta * tau;
    let pref = -r.g_n2
        * C::new(-p.gamma * (t - tau), -0.5 * w * p.length + r.omega_m * t - p.omega_m * tau).exp();
    let args = Phi2Args::new(C::new(1.0, mu), I * (mup - mu), C::new(2.0, 0.0), I * w * z, I * r.beta * z * t);
    (pref, args)
}

// Prefactor at z, and the Φ2 arguments at z.
fn coherence_kernel_parts(p: &GemParams, r: &RetrievalParams, z: f64, t: f64, tau: f64) -> (C, Phi2Args) {
    let (mu, mup) = (p.mu(), r.mu());
    let l = p.length;
    let phase = (r.beta * (z - 0.5 * l) + r.omega_m) * t + (0.5 * p.beta * l - p.omega_m) * tau;
    let pref = -p.g_n2 * C::new(-p.gamma * (t - tau), phase).exp();
    let args = Phi2Args::new(
        C::new(1.0, mu),
        C::new(0.0, -mup),
        C::new(1.0, 0.0),
        -I * p.beta * z * tau,
        -I * r.beta * z * t,
    );
    (pref, args)
}

/// Echo at the exit for the symmetric switch, sampled at `t = k dt` on
/// `[0, T]` with the input's step `dt`.
pub fn retrieval_echo(p: &GemParams, r: &RetrievalParams, a_in: &Waveform, ctl: &EvalControl) -> Result<Waveform> {
    p.check()?;
    ctl.check()?;
    if !r.is_symmetric(p) {
        return invalid("symmetric echo needs β' = −β and unchanged coupling");
    }
    let dt = a_in.dt;
    let nk = (p.window / dt).round() as usize + 1;
    let taus = a_in.times();
    let amax = a_in.max_abs();
    let active: Vec<usize> = (0..a_in.len()).filter(|&j| a_in.samples[j].norm() > 1e-16 * amax).collect();
    let n = a_in.len();
    let out = par::try_map_indexed(nk, |k| {
        let t = k as f64 * dt;
        let mut acc = C::new(0.0, 0.0);
        for &j in &active {
            let kern = general_field_kernel(p, r, p.length, t, taus[j], ctl)?;
            acc += gregory_weight(j, n) * a_in.samples[j] * kern;
        }
        Ok::<_, crate::Error>(acc * dt)
    })?;
    Waveform::new(0.0, dt, out)
}

/// Field and polarization during retrieval at positions `z` (ascending,
/// from the entrance) and times `t > 0`.
#[derive(Debug, Clone)]
pub struct RetrievalSolution {
    pub field: Lattice,
    pub coherence: Lattice,
}

/// General retrieval with arbitrary `β'`, `ω'_m` and `|g|²N'`. The
/// polarization is reported with the storage normalization `g* N S`.
pub fn retrieval_general(
    p: &GemParams,
    r: &RetrievalParams,
    a_in: &Waveform,
    z: &[f64],
    t: &[f64],
    ctl: &EvalControl,
) -> Result<RetrievalSolution> {
    check(p, r)?;
    ctl.check()?;
    if z.is_empty() || z.windows(2).any(|w| w[1] < w[0]) || z[0] < 0.0 {
        return invalid("positions must be non-negative and ascending");
    }
    let zmax = z[z.len() - 1];
    let s: Vec<f64> = z.iter().map(|&v| if zmax > 0.0 { v / zmax } else { 0.0 }).collect();
    let taus = a_in.times();
    let n = a_in.len();
    let amax = a_in.max_abs();
    let active: Vec<usize> = (0..n).filter(|&j| a_in.samples[j].norm() > 1e-16 * amax).collect();
    let cols = par::try_map_indexed(t.len(), |k| {
        let tk = t[k];
        let mut field = vec![C::new(0.0, 0.0); z.len()];
        let mut coh = vec![C::new(0.0, 0.0); z.len()];
        for &j in &active {
            let w = gregory_weight(j, n) * a_in.dt * a_in.samples[j];
            let (fp, fargs) = field_kernel_parts(p, r, zmax, tk, taus[j]);
            let fv = humbert_phi2_ray(&fargs, &s, ctl)?;
            let (_, cargs) = coherence_kernel_parts(p, r, zmax, tk, taus[j]);
            let cv = humbert_phi2_ray(&cargs, &s, ctl)?;
            for (iz, &zi) in z.iter().enumerate() {
                field[iz] += w * fp * zi * fv[iz];
                let (cp, _) = coherence_kernel_parts(p, r, zi, tk, taus[j]);
                coh[iz] += w * cp * cv[iz];
            }
        }
        Ok::<_, crate::Error>((field, coh))
    })?;
    let mut field = Lattice::zeros(z.to_vec(), t.to_vec());
    let mut coherence = Lattice::zeros(z.to_vec(), t.to_vec());
    for (k, (f, c)) in cols.into_iter().enumerate() {
        for iz in 0..z.len() {
            field.set(iz, k, f[iz]);
            coherence.set(iz, k, c[iz]);
        }
    }
    Ok(RetrievalSolution { field, coherence })
}
