use num_complex::Complex64;

use super::GemParams;
use crate::error::Result;
use crate::grid::{Lattice, Waveform};
use crate::par;
use crate::specfun::{bessel_j0, j1_tilde, kummer_1f1, kummer_1f1_ray, EvalControl};

type C = Complex64;

/// Field and polarization inside the medium during storage.
#[derive(Debug, Clone)]
pub struct StorageSolution {
    pub field: Lattice,
    pub coherence: Lattice,
    pub warnings: Vec<String>,
}

/// Field response at `z` to a unit impulse that entered `u` earlier,
/// excluding the transmitted impulse itself:
/// `−|g|²N z e^{−i(βL/2−ω_m)u} e^{−γu} 1F1(iμ+1; 2; iβzu)`, or with
/// `J̃1(|g|²N z u)` in place of `1F1` for a flat medium.
pub fn field_impulse_response(p: &GemParams, z: f64, u: f64, ctl: &EvalControl) -> Result<C> {
    p.check()?;
    if u < 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let k = if p.beta == 0.0 {
        C::new(j1_tilde(p.g_n2 * z * u), 0.0)
    } else {
        kummer_1f1(C::new(1.0, p.mu()), C::new(2.0, 0.0), C::new(0.0, p.beta * z * u), ctl)?
    };
    Ok(-p.g_n2 * z * lag_phase(p, u) * k)
}

/// Polarization response at `z` to a unit impulse that entered `u`
/// earlier: `−|g|²N e^{−i(βL/2−ω_m)u} e^{−γu} 1F1(iμ+1; 1; iβzu)`, or with
/// `J0(2√(|g|²N z u))` for a flat medium.
pub fn coherence_impulse_response(p: &GemParams, z: f64, u: f64, ctl: &EvalControl) -> Result<C> {
    p.check()?;
    if u < 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let k = if p.beta == 0.0 {
        C::new(bessel_j0(2.0 * (p.g_n2 * z * u).sqrt()), 0.0)
    } else {
        kummer_1f1(C::new(1.0, p.mu()), C::new(1.0, 0.0), C::new(0.0, p.beta * z * u), ctl)?
    };
    Ok(-p.g_n2 * lag_phase(p, u) * k)
}

fn lag_phase(p: &GemParams, u: f64) -> C {
    C::new(-p.gamma * u, -(0.5 * p.beta * p.length - p.omega_m) * u).exp()
}

/// Evolves the field `a(z, t)` and polarization `P(z, t)` on the input's
/// time grid for the positions `z` (measured from the entrance). The
/// input is taken as zero before its first sample.
pub fn storage_evolve(p: &GemParams, a_in: &Waveform, z: &[f64], ctl: &EvalControl) -> Result<StorageSolution> {
    p.check()?;
    ctl.check()?;
    let n = a_in.len();
    let dt = a_in.dt;
    let mut warnings = Vec::new();
    let f_max = (0.5 * p.beta * p.length - p.omega_m).abs().max((0.5 * p.beta * p.length + p.omega_m).abs());
    if f_max * dt > std::f64::consts::FRAC_PI_4 {
        let msg = format!("time step {dt} under-resolves kernel frequency {f_max:.3}");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let phase: Vec<C> = (0..n).map(|l| lag_phase(p, l as f64 * dt)).collect();
    let rows = par::try_map_indexed(z.len(), |iz| {
        let (k2, k1) = kernels(p, z[iz], n, dt, ctl)?;
        let mut field = Vec::with_capacity(n);
        let mut coh = Vec::with_capacity(n);
        for i in 0..n {
            let (mut sf, mut sc) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
            for j in 0..=i {
                let w = gregory_weight(j, i + 1) * a_in.samples[j] * phase[i - j];
                sf += w * k2[i - j];
                sc += w * k1[i - j];
            }
            field.push(a_in.samples[i] - p.g_n2 * z[iz] * dt * sf);
            coh.push(-p.g_n2 * dt * sc);
        }
        Ok::<_, crate::Error>((field, coh))
    })?;
    let t = a_in.times();
    let mut field = Lattice::zeros(z.to_vec(), t.clone());
    let mut coherence = Lattice::zeros(z.to_vec(), t);
    for (iz, (f, c)) in rows.into_iter().enumerate() {
        field.data[iz * n..(iz + 1) * n].copy_from_slice(&f);
        coherence.data[iz * n..(iz + 1) * n].copy_from_slice(&c);
    }
    Ok(StorageSolution { field, coherence, warnings })
}

/// Transmitted (leaked) field at the exit `z = L` on the input's grid.
pub fn storage_output(p: &GemParams, a_in: &Waveform, ctl: &EvalControl) -> Result<Waveform> {
    let sol = storage_evolve(p, a_in, &[p.length], ctl)?;
    Waveform::new(a_in.t0, a_in.dt, sol.field.row(0).to_vec())
}

// 1F1(iμ+1; 2; iβzu) and 1F1(iμ+1; 1; iβzu) at lags u = j dt.
fn kernels(p: &GemParams, z: f64, n: usize, dt: f64, ctl: &EvalControl) -> Result<(Vec<C>, Vec<C>)> {
    if z == 0.0 || n < 2 {
        return Ok((vec![C::new(1.0, 0.0); n], vec![C::new(1.0, 0.0); n]));
    }
    let span = (n - 1) as f64 * dt;
    if p.beta == 0.0 {
        let x = |j: usize| p.g_n2 * z * j as f64 * dt;
        let k2 = (0..n).map(|j| C::new(j1_tilde(x(j)), 0.0)).collect();
        let k1 = (0..n).map(|j| C::new(bessel_j0(2.0 * x(j).sqrt()), 0.0)).collect();
        return Ok((k2, k1));
    }
    let s: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();
    let a = C::new(1.0, p.mu());
    let zend = C::new(0.0, p.beta * z * span);
    let k2 = kummer_1f1_ray(a, C::new(2.0, 0.0), zend, &s, ctl)?;
    let k1 = kummer_1f1_ray(a, C::new(1.0, 0.0), zend, &s, ctl)?;
    Ok((k2, k1))
}

/// Weight of node `j` in a Gregory-corrected trapezoid rule over `len`
/// unit-spaced nodes.
pub(crate) fn gregory_weight(j: usize, len: usize) -> f64 {
    match len {
        0 | 1 => 0.0,
        2..=5 => {
            if j == 0 || j == len - 1 {
                0.5
            } else {
                1.0
            }
        }
        _ => {
            let k = j.min(len - 1 - j);
            match k {
                0 => 3.0 / 8.0,
                1 => 7.0 / 6.0,
                2 => 23.0 / 24.0,
                _ => 1.0,
            }
        }
    }
}
