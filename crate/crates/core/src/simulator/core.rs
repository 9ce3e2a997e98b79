use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Gauge, SimGrid, SimOptions};
use crate::error::{Error, Result};
use crate::grid::Lattice;

type C = Complex64;

/// A contiguous slab of atoms. Gaps between slabs carry the field
/// unchanged.
#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub z: Vec<f64>,
    /// Detuning before and after the switch.
    pub detuning: [Vec<f64>; 2],
    /// Field coupling `N'/N` before and after the switch.
    pub rho: [f64; 2],
}

pub(crate) struct Medium {
    pub segments: Vec<Segment>,
    pub g_n2: f64,
    pub gamma: f64,
}

/// Energy bookkeeping of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    /// `∫|a(0, t)|² dt` over the run.
    pub input: f64,
    /// `∫|a(L, t)|² dt` over the run.
    pub output: f64,
    /// `(ρ/|g|²N) ∫|P(z, t_end)|² dz`, the energy left in the atoms.
    pub stored: f64,
}

impl EnergyBudget {
    /// `(output + stored − input) / input`.
    pub fn imbalance(&self) -> f64 {
        (self.output + self.stored - self.input) / self.input.max(f64::MIN_POSITIVE)
    }
}

pub(crate) struct RunOutput {
    pub exit: Vec<C>,
    /// Exit field just after the switch, when the switch lies inside the grid.
    pub exit_after_switch: Option<C>,
    pub energy: EnergyBudget,
    pub field: Option<Lattice>,
    pub coherence: Option<Lattice>,
}

#[derive(Clone)]
struct Coeffs {
    decay: Vec<C>,
    wa: Vec<C>,
    wb: Vec<C>,
}

// ∫_0^1 e^{−xw} w dw and ∫_0^1 e^{−xw} (1 − w) dw
fn phi_weights(x: C) -> (C, C) {
    if x.norm() < 0.5 {
        let (mut a, mut b) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let mut p = C::new(1.0, 0.0);
        for k in 0..24 {
            let kf = k as f64;
            a += p / (kf + 2.0);
            b += p / ((kf + 1.0) * (kf + 2.0));
            p *= -x / (kf + 1.0);
        }
        (a, b)
    } else {
        let e = (-x).exp();
        let x2 = x * x;
        ((1.0 - e * (1.0 + x)) / x2, (x - 1.0 + e) / x2)
    }
}

fn coeffs(det: &[f64], gamma: f64, h: f64) -> Coeffs {
    let mut c = Coeffs { decay: vec![], wa: vec![], wb: vec![] };
    for &d in det {
        let x = C::new(gamma, -d) * h;
        let (a, b) = phi_weights(x);
        c.decay.push((-x).exp());
        c.wa.push(a * h);
        c.wb.push(b * h);
    }
    c
}

fn trapezoid_z(z: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..z.len()).map(|j| 0.5 * (f(j - 1) + f(j)) * (z[j] - z[j - 1])).sum()
}

/// Integrates the medium on `grid`; the step starting at `switch_step`
/// and all later ones use the post-switch detuning and coupling. At the
/// switch the entrance field jumps to `after_switch` and the field is
/// rebuilt from the continuous polarization.
pub(crate) fn run(
    medium: &Medium,
    grid: &SimGrid,
    boundary: impl Fn(f64) -> C,
    switch_step: usize,
    after_switch: C,
    opts: &SimOptions,
) -> Result<RunOutput> {
    grid.check()?;
    let h = grid.dt();
    let nt = grid.nt;
    let g = medium.g_n2;
    let coeff: Vec<[Coeffs; 2]> = medium
        .segments
        .iter()
        .map(|s| [coeffs(&s.detuning[0], medium.gamma, h), coeffs(&s.detuning[1], medium.gamma, h)])
        .collect();
    let mut a: Vec<Vec<C>> = medium.segments.iter().map(|s| vec![C::new(0.0, 0.0); s.z.len()]).collect();
    // lab gauge: P; rotating gauge: σ = P e^{−iφ}
    let mut p: Vec<Vec<C>> = a.clone();
    let mut c_buf: Vec<Vec<C>> = a.clone();
    let all_z: Vec<f64> = medium.segments.iter().flat_map(|s| s.z.iter().copied()).collect();
    let record = opts.record_stride > 0;
    let rec_t: Vec<f64> = if record {
        (0..nt).step_by(opts.record_stride).map(|n| grid.time(n)).collect()
    } else {
        Vec::new()
    };
    let mut field = record.then(|| Lattice::zeros(all_z.clone(), rec_t.clone()));
    let mut coh = record.then(|| Lattice::zeros(all_z.clone(), rec_t.clone()));
    // φ(z, t) relative to the switch time, continuous there
    let t_switch = grid.time(switch_step.min(nt - 1));
    let phase = |seg: usize, j: usize, t: f64| -> f64 {
        let s = &medium.segments[seg];
        if t <= t_switch {
            s.detuning[0][j] * (t - t_switch)
        } else {
            s.detuning[1][j] * (t - t_switch)
        }
    };
    let to_p = |seg: usize, j: usize, t: f64, v: C, gauge: Gauge| -> C {
        match gauge {
            Gauge::Lab => v,
            Gauge::Rotating => v * C::from_polar(1.0, phase(seg, j, t)),
        }
    };

    // initial field: the boundary value propagates unchanged while P = 0
    let a0 = boundary(grid.time(0));
    for seg in a.iter_mut() {
        seg.iter_mut().for_each(|v| *v = a0);
    }
    let mut exit = Vec::with_capacity(nt);
    exit.push(a0);
    let mut energy = EnergyBudget::default();
    let mut prev_in = a0.norm_sqr();
    let mut prev_out = a0.norm_sqr();
    let store = |n: usize, a: &Vec<Vec<C>>, p: &Vec<Vec<C>>, field: &mut Option<Lattice>, coh: &mut Option<Lattice>| {
        if let (Some(f), Some(c)) = (field.as_mut(), coh.as_mut()) {
            if n % opts.record_stride == 0 {
                let k = n / opts.record_stride;
                let t = grid.time(n);
                let mut iz = 0;
                for (seg, (sa, sp)) in a.iter().zip(p).enumerate() {
                    for j in 0..sa.len() {
                        f.set(iz, k, sa[j]);
                        c.set(iz, k, to_p(seg, j, t, sp[j], opts.gauge));
                        iz += 1;
                    }
                }
            }
        }
    };
    store(0, &a, &p, &mut field, &mut coh);

    let mut exit_after_switch = None;
    for n in 0..nt - 1 {
        if n == switch_step {
            let t = grid.time(n);
            let mut carry = after_switch;
            for (si, seg) in medium.segments.iter().enumerate() {
                let (sa, sp) = (&mut a[si], &p[si]);
                let pv = |j: usize| to_p(si, j, t, sp[j], opts.gauge);
                sa[0] = carry;
                for j in 1..sa.len() {
                    let k = 0.5 * (seg.z[j] - seg.z[j - 1]) * seg.rho[1];
                    sa[j] = sa[j - 1] + k * (pv(j - 1) + pv(j));
                }
                carry = sa[sa.len() - 1];
            }
            exit_after_switch = Some(carry);
            prev_in = after_switch.norm_sqr();
            prev_out = carry.norm_sqr();
        }
        let stage = usize::from(n >= switch_step);
        let t1 = grid.time(n + 1);
        let a_in = boundary(t1);
        let mut carry = a_in;
        for (si, seg) in medium.segments.iter().enumerate() {
            let cf = &coeff[si][stage];
            let rho = seg.rho[stage];
            let (sa, sp, sc) = (&mut a[si], &mut p[si], &mut c_buf[si]);
            let m = seg.z.len();
            match opts.gauge {
                Gauge::Lab => {
                    for j in 0..m {
                        sc[j] = cf.decay[j] * sp[j] - g * cf.wa[j] * sa[j];
                    }
                }
                Gauge::Rotating => {
                    let gd = (-medium.gamma * h).exp();
                    for j in 0..m {
                        let back = C::from_polar(1.0, -phase(si, j, t1));
                        sc[j] = gd * sp[j] - g * back * cf.wa[j] * sa[j];
                    }
                }
            }
            // march in z: P_j = c_j − g wb_j a_j, a_j = a_{j−1} + (dz ρ / 2)(P_{j−1} + P_j)
            let mut p_prev = C::new(0.0, 0.0);
            for j in 0..m {
                let (cj, wb) = match opts.gauge {
                    Gauge::Lab => (sc[j], cf.wb[j]),
                    Gauge::Rotating => {
                        let fwd = C::from_polar(1.0, phase(si, j, t1));
                        (sc[j] * fwd, cf.wb[j])
                    }
                };
                let aj = if j == 0 {
                    carry
                } else {
                    let k = 0.5 * (seg.z[j] - seg.z[j - 1]) * rho;
                    (sa[j - 1] + k * (p_prev + cj)) / (1.0 + k * g * wb)
                };
                let pj = cj - g * wb * aj;
                sa[j] = aj;
                sp[j] = match opts.gauge {
                    Gauge::Lab => pj,
                    Gauge::Rotating => pj * C::from_polar(1.0, -phase(si, j, t1)),
                };
                p_prev = pj;
            }
            carry = sa[m - 1];
        }
        exit.push(carry);
        let (cur_in, cur_out) = (a_in.norm_sqr(), carry.norm_sqr());
        energy.input += 0.5 * h * (prev_in + cur_in);
        energy.output += 0.5 * h * (prev_out + cur_out);
        prev_in = cur_in;
        prev_out = cur_out;
        store(n + 1, &a, &p, &mut field, &mut coh);
        if n % 64 == 0 || n + 2 == nt {
            let stored = stored_energy(medium, &p, stage, g);
            let total = energy.output + stored;
            if !total.is_finite() || (energy.input > 0.0 && total > opts.divergence_ratio * energy.input + 1e-12) {
                return Err(Error::Divergence { step: n + 1, ratio: total / energy.input.max(f64::MIN_POSITIVE) });
            }
        }
    }
    let stage = usize::from(nt - 1 > switch_step);
    energy.stored = stored_energy(medium, &p, stage, g);
    Ok(RunOutput { exit, exit_after_switch, energy, field, coherence: coh })
}

fn stored_energy(medium: &Medium, p: &[Vec<C>], stage: usize, g: f64) -> f64 {
    medium
        .segments
        .iter()
        .zip(p)
        .map(|(s, sp)| s.rho[stage] / g * trapezoid_z(&s.z, |j| sp[j].norm_sqr()))
        .sum()
}
