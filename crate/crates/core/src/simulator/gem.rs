use num_complex::Complex64;

use super::core::{run, Medium, Segment};
use super::{EnergyBudget, SimGrid, SimOptions};
use crate::error::{invalid, Result};
use crate::gem::{GemParams, RetrievalParams};
use crate::grid::{Lattice, Waveform};

/// Result of a memory simulation.
#[derive(Debug, Clone)]
pub struct GemRun {
    /// Field on the recorded grid, positions from the entrance.
    pub field: Option<Lattice>,
    /// Polarization `g* N S` on the recorded grid.
    pub coherence: Option<Lattice>,
    /// Exit field for `t ≤ 0`.
    pub leakage: Waveform,
    /// Exit field for `t ≥ 0`, starting from the limit `t → 0+`.
    pub echo: Waveform,
    pub energy: EnergyBudget,
}

/// Simulates storage for `t ≤ 0` and retrieval with `r` for `t > 0`.
/// The switch time `t = 0` must be a node of the time grid and the input
/// is read by linear interpolation, zero outside its span and for `t > 0`.
pub fn simulate_gem(
    p: &GemParams,
    r: &RetrievalParams,
    a_in: &Waveform,
    grid: &SimGrid,
    opts: &SimOptions,
) -> Result<GemRun> {
    p.check()?;
    r.check()?;
    grid.check()?;
    let dt = grid.dt();
    let k0 = -grid.t_start / dt;
    if grid.t_start > 0.0 || grid.t_end < 0.0 || (k0 - k0.round()).abs() > 1e-6 {
        return invalid("t = 0 must be a node of the simulation time grid");
    }
    let switch = k0.round() as usize;
    let l = p.length;
    let z: Vec<f64> = (0..grid.nz).map(|j| l * j as f64 / (grid.nz - 1) as f64).collect();
    let det = |beta: f64, om: f64| z.iter().map(|&zj| beta * (zj - 0.5 * l) + om).collect::<Vec<_>>();
    let medium = Medium {
        segments: vec![Segment {
            detuning: [det(p.beta, p.omega_m), det(r.beta, r.omega_m)],
            rho: [1.0, r.density_ratio(p)],
            z,
        }],
        g_n2: p.g_n2,
        gamma: p.gamma,
    };
    let boundary = |t: f64| {
        if t > 1e-12 * dt {
            Complex64::new(0.0, 0.0)
        } else {
            a_in.sample_at(t)
        }
    };
    let out = run(&medium, grid, boundary, switch, Complex64::new(0.0, 0.0), opts)?;
    let leakage = Waveform::new(grid.t_start, dt, out.exit[..=switch].to_vec())
        .unwrap_or_else(|_| Waveform::empty(grid.t_start, dt));
    let mut tail = out.exit[switch..].to_vec();
    if let Some(v) = out.exit_after_switch {
        tail[0] = v;
    }
    let echo = Waveform::new(0.0, dt, tail).unwrap_or_else(|_| Waveform::empty(0.0, dt));
    Ok(GemRun { field: out.field, coherence: out.coherence, leakage, echo, energy: out.energy })
}
