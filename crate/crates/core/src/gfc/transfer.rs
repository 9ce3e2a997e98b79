use num_complex::Complex64;
use rustfft::FftPlanner;

use super::params::{GfcParams, Variant};
use crate::error::{Error, Result};
use crate::grid::Waveform;
use crate::par;

type C = Complex64;

// keeps the logs finite when γ = 0 and ω sits exactly on a tooth edge
const GAMMA_FLOOR: f64 = 1e-14;

/// `Σ_m ∫ Θ_m(z) dz / (γ + i(ω − Δ_m(z)))`, so that the comb output is
/// `a_in(ω) e^{−|g|²N F(ω)}` with `a(t) = ∫ a(ω) e^{iωt} dω/2π`. Tooth `m`
/// is resonant at `ω = Δ_m`. `extra_decay` adds to `γ` and evaluates the
/// response at `ω − i·extra_decay`.
pub fn transfer_exponent(p: &GfcParams, omega: f64, extra_decay: f64) -> C {
    let g = (p.gamma + extra_decay).max(GAMMA_FLOOR * p.delta_omega);
    let mut acc = C::new(0.0, 0.0);
    match p.variant {
        Variant::Stepwise => {
            for m in p.tooth_indices() {
                acc += p.thickness / C::new(g, omega - m as f64 * p.delta_omega);
            }
        }
        Variant::Discontinuous => {
            let b = p.beta_eff();
            for m in p.tooth_indices() {
                let (lo, hi) = p.tooth_span(m);
                let d = C::new(g, omega - b * hi).ln() - C::new(g, omega - b * lo).ln();
                acc += C::new(0.0, 1.0 / b) * d;
            }
        }
    }
    acc
}

/// Exact frequency response of the finite comb.
pub fn transfer_function(omega: f64, p: &GfcParams) -> C {
    (-p.g_n2 * transfer_exponent(p, omega, 0.0)).exp()
}

/// Filters `a_in` through the comb and returns the output on the input
/// grid extended to `horizon`. The record is damped by `e^{−σt}` before the
/// transform and padded so that the periodic images are suppressed below
/// `1e−11`.
pub fn propagate_via_transfer(a_in: &Waveform, p: &GfcParams, horizon: f64) -> Result<Waveform> {
    p.check()?;
    let dt = a_in.dt;
    let edge = (p.half_count() as f64 + 0.5) * p.delta_omega + 0.5 * p.beta() * p.thickness;
    if edge * dt >= std::f64::consts::PI {
        return Err(Error::Aliasing(format!(
            "sample step {dt} cannot represent comb edge at {edge} rad/time"
        )));
    }
    if !(horizon > a_in.t0 + dt) {
        return Err(Error::Aliasing(format!(
            "echo horizon {horizon} lies before the end of the first sample step"
        )));
    }
    let n_out = ((horizon - a_in.t0) / dt).round() as usize + 1;
    let n_out = n_out.max(a_in.len());
    let n = (4 * n_out).next_power_of_two();
    let sigma = 25.0 / (n as f64 * dt);

    let mut buf = vec![C::new(0.0, 0.0); n];
    for (j, v) in a_in.samples.iter().enumerate() {
        buf[j] = v * (-sigma * j as f64 * dt).exp();
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let df = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    let h = par::map_indexed(n, |k| {
        let ks = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        (-p.g_n2 * transfer_exponent(p, ks * df, sigma)).exp()
    });
    for (b, hk) in buf.iter_mut().zip(&h) {
        *b *= hk;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let out: Vec<C> = (0..n_out).map(|j| buf[j] * scale * (sigma * j as f64 * dt).exp()).collect();
    Waveform::new(a_in.t0, dt, out)
}
