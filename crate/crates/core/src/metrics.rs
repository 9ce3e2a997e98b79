//! Efficiency, fidelity and amplitude preservation of a retrieved pulse,
//! and partition of an echo train into per-echo windows.
//!
//! With `N = ∫|a|² dt` over each record,
//!
//! ```text
//! η = N_out / N_in
//! 𝓕 = |∫ a_in*(t̄ − t) a_out(t) dt|² / (N_in N_out)
//! 𝓐 = (∫ |a_in(t̄ − t)| |a_out(t)| dt)² / (N_in N_out)
//! ```
//!
//! where the integrals run over the output record. When `t̄ − t` falls off
//! the input grid the input is interpolated with a Lanczos kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::Waveform;
use crate::par;

type C = Complex64;

const LANCZOS_A: i64 = 8;

/// Reference time of the overlap integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TBar {
    Fixed(f64),
    /// Maximize the fidelity over grid-aligned `t̄`.
    Auto,
}

impl Default for TBar {
    fn default() -> Self {
        TBar::Fixed(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n_in: f64,
    pub n_out: f64,
    pub eta: f64,
    /// `None` when the output carries no energy.
    pub fidelity: Option<f64>,
    pub amp_preservation: Option<f64>,
    pub t_bar: f64,
    /// Span of the output record.
    pub window: (f64, f64),
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Input value at an arbitrary time: exact on grid nodes, normalized
/// Lanczos interpolation between them, zero outside the record.
fn input_at(a: &Waveform, s: f64) -> C {
    let n = a.len() as i64;
    let x = (s - a.t0) / a.dt;
    if x < -1e-9 || x > (n - 1) as f64 + 1e-9 {
        return C::new(0.0, 0.0);
    }
    let k = x.round();
    if (x - k).abs() <= 1e-9 {
        return a.samples[(k as i64).clamp(0, n - 1) as usize];
    }
    let i0 = x.floor() as i64;
    let mut acc = C::new(0.0, 0.0);
    let mut wsum = 0.0;
    for i in (i0 - LANCZOS_A + 1)..=(i0 + LANCZOS_A) {
        let u = x - i as f64;
        let w = sinc(u) * sinc(u / LANCZOS_A as f64);
        wsum += w;
        if (0..n).contains(&i) {
            acc += a.samples[i as usize] * w;
        }
    }
    acc / wsum
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

// (∫ a_in*(t̄ − t) a_out dt, ∫ |a_in(t̄ − t)| |a_out| dt)
fn overlaps(a_in: &Waveform, a_out: &Waveform, t_bar: f64) -> (C, f64) {
    let n = a_out.len();
    let mut o = C::new(0.0, 0.0);
    let mut m = 0.0;
    for (i, y) in a_out.samples.iter().enumerate() {
        let x = input_at(a_in, t_bar - a_out.time(i));
        let w = trapezoid_weight(i, n) * a_out.dt;
        o += w * x.conj() * y;
        m += w * x.norm() * y.norm();
    }
    (o, m)
}

fn input_energy(a_in: &Waveform) -> Result<f64> {
    let n_in = a_in.energy();
    if !(n_in > 0.0) {
        return Err(Error::ZeroInput);
    }
    Ok(n_in)
}

/// `N_out / N_in`.
pub fn efficiency(a_in: &Waveform, a_out: &Waveform) -> Result<f64> {
    Ok(a_out.energy() / input_energy(a_in)?)
}

fn best_t_bar(a_in: &Waveform, a_out: &Waveform) -> f64 {
    let step = a_in.dt.min(a_out.dt);
    let lo = a_in.t0 + a_out.t0;
    let hi = a_in.t_end() + a_out.t_end();
    let count = ((hi - lo) / step).round() as usize + 1;
    let scores = par::map_indexed(count, |k| {
        let tb = lo + k as f64 * step;
        overlaps(a_in, a_out, tb).0.norm_sqr()
    });
    let k = scores
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, &s)| if s > acc.1 { (k, s) } else { acc })
        .0;
    lo + k as f64 * step
}

fn resolve(a_in: &Waveform, a_out: &Waveform, t_bar: TBar) -> f64 {
    match t_bar {
        TBar::Fixed(t) => t,
        TBar::Auto => best_t_bar(a_in, a_out),
    }
}

/// Fidelity, `None` if the output is empty.
pub fn fidelity(a_in: &Waveform, a_out: &Waveform, t_bar: TBar) -> Result<Option<f64>> {
    Ok(evaluate(a_in, a_out, t_bar)?.fidelity)
}

/// Amplitude preservation, `None` if the output is empty.
pub fn amplitude_preservation(a_in: &Waveform, a_out: &Waveform, t_bar: TBar) -> Result<Option<f64>> {
    Ok(evaluate(a_in, a_out, t_bar)?.amp_preservation)
}

pub fn evaluate(a_in: &Waveform, a_out: &Waveform, t_bar: TBar) -> Result<MetricsReport> {
    let n_in = input_energy(a_in)?;
    let n_out = a_out.energy();
    let tb = resolve(a_in, a_out, t_bar);
    let (fid, amp) = if n_out > 0.0 {
        let (o, m) = overlaps(a_in, a_out, tb);
        let norm = n_in * n_out;
        (Some(o.norm_sqr() / norm), Some(m * m / norm))
    } else {
        (None, None)
    };
    Ok(MetricsReport {
        n_in,
        n_out,
        eta: n_out / n_in,
        fidelity: fid,
        amp_preservation: amp,
        t_bar: tb,
        window: (a_out.t0, a_out.t_end()),
    })
}

/// Diagnostic overlap against the reversed input stretched in time,
/// `a_in(t̄ − t/s)`, normalized by the energy of that reference on the
/// output grid. For retrieval with `|β'| ≠ |β|` the echo is stretched by
/// `s = |β/β'|`; the plain fidelity does not account for this. `None` if
/// either side carries no energy.
pub fn stretched_fidelity(a_in: &Waveform, a_out: &Waveform, t_bar: f64, stretch: f64) -> Result<Option<f64>> {
    input_energy(a_in)?;
    if !(stretch > 0.0) || !stretch.is_finite() {
        return invalid(format!("stretch must be positive, got {stretch}"));
    }
    let n = a_out.len();
    let (mut o, mut e_ref, mut e_out) = (C::new(0.0, 0.0), 0.0, 0.0);
    for (i, y) in a_out.samples.iter().enumerate() {
        let x = input_at(a_in, t_bar - a_out.time(i) / stretch);
        let w = trapezoid_weight(i, n) * a_out.dt;
        o += w * x.conj() * y;
        e_ref += w * x.norm_sqr();
        e_out += w * y.norm_sqr();
    }
    if !(e_ref > 0.0 && e_out > 0.0) {
        return Ok(None);
    }
    Ok(Some(o.norm_sqr() / (e_ref * e_out)))
}

/// One window `[origin + (n − ½)T0, origin + (n + ½)T0]` of an echo train;
/// `index` 0 is the leakage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoWindow {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub energy: f64,
    pub peak_time: f64,
    pub peak: C,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoPartition {
    pub windows: Vec<EchoWindow>,
    /// Energy over the union of the windows.
    pub total: f64,
}

/// Splits `a_out` into windows centred on `origin + n T0`, `n = 0..=n_max`.
/// The record must reach `origin + (n_max + ½)T0`.
pub fn echo_partition(a_out: &Waveform, origin: f64, period: f64, n_max: usize) -> Result<EchoPartition> {
    if !(period > 0.0) || !period.is_finite() {
        return invalid("echo period must be positive");
    }
    let needed = origin + (n_max as f64 + 0.5) * period;
    if a_out.t_end() < needed - 1e-9 * a_out.dt {
        return Err(Error::HorizonTooShort { end: a_out.t_end(), needed });
    }
    let windows = (0..=n_max)
        .map(|n| {
            let start = origin + (n as f64 - 0.5) * period;
            let end = start + period;
            let (mut peak_time, mut peak) = (origin + n as f64 * period, C::new(0.0, 0.0));
            for (i, v) in a_out.samples.iter().enumerate() {
                let t = a_out.time(i);
                if t >= start && t < end && v.norm() > peak.norm() {
                    peak = *v;
                    peak_time = t;
                }
            }
            EchoWindow { index: n, start, end, energy: a_out.energy_between(start, end), peak_time, peak }
        })
        .collect();
    let total = a_out.energy_between(origin - 0.5 * period, needed);
    Ok(EchoPartition { windows, total })
}
