//! Sampled waveforms and space-time lattices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A complex envelope sampled on a uniform time grid `t0 + i*dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Complex64>,
}

impl Waveform {
    pub fn new(t0: f64, dt: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return invalid(format!("waveform step must be positive and finite, got {dt}"));
        }
        if samples.len() < 2 {
            return invalid("waveform needs at least two samples");
        }
        Ok(Self { t0, dt, samples })
    }

    /// A waveform without samples, only useful as a placeholder for output.
    pub fn empty(t0: f64, dt: f64) -> Self {
        Self { t0, dt, samples: Vec::new() }
    }

    /// Samples `f` at `n` nodes spanning `[t0, t1]` inclusively.
    pub fn from_fn(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n < 2 || !(t1 > t0) {
            return invalid(format!("bad waveform grid [{t0}, {t1}] with {n} nodes"));
        }
        let dt = (t1 - t0) / (n - 1) as f64;
        let samples = (0..n).map(|i| f(t0 + i as f64 * dt)).collect();
        Self::new(t0, dt, samples)
    }

    /// Gaussian pulse `exp(-4 ln2 (t - t_in)^2 / fwhm^2)`; `fwhm` is the
    /// full width at half maximum of the amplitude.
    pub fn gaussian(t_in: f64, fwhm: f64, t0: f64, t1: f64, n: usize) -> Result<Self> {
        if !(fwhm > 0.0) {
            return invalid("pulse width must be positive");
        }
        let k = 4.0 * std::f64::consts::LN_2 / (fwhm * fwhm);
        Self::from_fn(t0, t1, n, |t| Complex64::new((-k * (t - t_in).powi(2)).exp(), 0.0))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    /// `∫|a|^2 dt` by the trapezoid rule.
    pub fn energy(&self) -> f64 {
        trapezoid_energy(&self.samples, self.dt)
    }

    /// Energy of the piecewise-linear interpolant of `|a|^2` on `[ta, tb]`.
    /// Splitting an interval into adjacent windows is exactly additive.
    pub fn energy_between(&self, ta: f64, tb: f64) -> f64 {
        let n = self.len();
        if n < 2 || tb <= ta {
            return 0.0;
        }
        let ta = ta.max(self.t0);
        let tb = tb.min(self.t_end());
        if tb <= ta {
            return 0.0;
        }
        let p: Vec<f64> = self.samples.iter().map(|a| a.norm_sqr()).collect();
        let lin = |t: f64| {
            let x = ((t - self.t0) / self.dt).clamp(0.0, (n - 1) as f64);
            let i = (x.floor() as usize).min(n - 2);
            let f = x - i as f64;
            p[i] * (1.0 - f) + p[i + 1] * f
        };
        let ia = ((ta - self.t0) / self.dt).floor() as usize;
        let mut acc = 0.0;
        let mut left = ta;
        let mut i = ia + 1;
        while i < n && self.time(i) < tb {
            let right = self.time(i);
            acc += 0.5 * (lin(left) + lin(right)) * (right - left);
            left = right;
            i += 1;
        }
        acc + 0.5 * (lin(left) + lin(tb)) * (tb - left)
    }

    /// Linear interpolation, exact on the nodes and zero outside the
    /// sampled span.
    pub fn sample_at(&self, t: f64) -> Complex64 {
        let n = self.len();
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = (t - self.t0) / self.dt;
        let eps = 1e-9;
        if x < -eps || x > (n - 1) as f64 + eps {
            return Complex64::new(0.0, 0.0);
        }
        let x = x.clamp(0.0, (n - 1) as f64);
        let k = x.round();
        if (x - k).abs() <= eps {
            return self.samples[k as usize];
        }
        let i = (x.floor() as usize).min(n.saturating_sub(2));
        let f = x - i as f64;
        self.samples[i] * (1.0 - f) + self.samples[i + 1] * f
    }

    /// Time and modulus of the largest sample.
    pub fn peak(&self) -> (f64, f64) {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, a)| (self.time(i), a.norm()))
            .fold((self.t0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Samples with `ta <= t <= tb` (up to rounding).
    pub fn window(&self, ta: f64, tb: f64) -> Result<Self> {
        let eps = 1e-9 * self.dt;
        let idx: Vec<usize> =
            (0..self.len()).filter(|&i| self.time(i) >= ta - eps && self.time(i) <= tb + eps).collect();
        if idx.len() < 2 {
            return invalid(format!("window [{ta}, {tb}] holds fewer than two samples"));
        }
        Self::new(self.time(idx[0]), self.dt, idx.iter().map(|&i| self.samples[i]).collect())
    }
}

pub(crate) fn trapezoid_energy(a: &[Complex64], dt: f64) -> f64 {
    match a.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = a[1..n - 1].iter().map(|x| x.norm_sqr()).sum();
            dt * (inner + 0.5 * (a[0].norm_sqr() + a[n - 1].norm_sqr()))
        }
    }
}

/// Complex values on a tensor grid of positions `z` and times `t`,
/// stored position-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub z: Vec<f64>,
    pub t: Vec<f64>,
    pub data: Vec<Complex64>,
}

impl Lattice {
    pub fn zeros(z: Vec<f64>, t: Vec<f64>) -> Self {
        let data = vec![Complex64::new(0.0, 0.0); z.len() * t.len()];
        Self { z, t, data }
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn nt(&self) -> usize {
        self.t.len()
    }

    #[inline]
    pub fn get(&self, iz: usize, it: usize) -> Complex64 {
        self.data[iz * self.t.len() + it]
    }

    #[inline]
    pub fn set(&mut self, iz: usize, it: usize, v: Complex64) {
        let nt = self.t.len();
        self.data[iz * nt + it] = v;
    }

    /// Time trace at position index `iz`.
    pub fn row(&self, iz: usize) -> &[Complex64] {
        let nt = self.t.len();
        &self.data[iz * nt..(iz + 1) * nt]
    }

    /// Spatial profile at time index `it`.
    pub fn column(&self, it: usize) -> Vec<Complex64> {
        (0..self.nz()).map(|iz| self.get(iz, it)).collect()
    }

    /// Index of the grid time closest to `t`.
    pub fn nearest_t(&self, t: f64) -> usize {
        nearest(&self.t, t)
    }

    /// Index of the grid position closest to `z`.
    pub fn nearest_z(&self, z: f64) -> usize {
        nearest(&self.z, z)
    }
}

fn nearest(v: &[f64], x: f64) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|p| p.0)
        .unwrap_or(0)
}

/// Relative L2 distance `||a - b|| / ||b||`.
pub fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

/// Relative L2 distance between moduli.
pub fn rel_l2_abs(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x.norm() - y.norm()).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}
