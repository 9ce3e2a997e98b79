use super::core::{run, Medium, Segment};
use super::{EnergyBudget, SimGrid, SimOptions};
use crate::error::Result;
use crate::gfc::GfcParams;
use crate::grid::{Lattice, Waveform};

/// Result of a comb simulation.
#[derive(Debug, Clone)]
pub struct GfcRun {
    /// Exit field over the whole time grid.
    pub output: Waveform,
    pub field: Option<Lattice>,
    pub coherence: Option<Lattice>,
    pub energy: EnergyBudget,
}

/// Simulates the comb with `grid.nz` nodes per tooth placed exactly on
/// the tooth faces, so no boundary snapping is needed.
pub fn simulate_gfc(p: &GfcParams, a_in: &Waveform, grid: &SimGrid, opts: &SimOptions) -> Result<GfcRun> {
    p.check()?;
    grid.check()?;
    let mut segments = Vec::new();
    for m in p.tooth_indices() {
        let (lo, hi) = p.tooth_span(m);
        let z: Vec<f64> = (0..grid.nz).map(|j| lo + (hi - lo) * j as f64 / (grid.nz - 1) as f64).collect();
        let det: Vec<f64> = z.iter().map(|&zj| p.detuning(m, zj)).collect();
        segments.push(Segment { detuning: [det.clone(), det], rho: [1.0, 1.0], z });
    }
    let medium = Medium { segments, g_n2: p.g_n2, gamma: p.gamma };
    let out = run(&medium, grid, |t| a_in.sample_at(t), grid.nt, Default::default(), opts)?;
    Ok(GfcRun {
        output: Waveform::new(grid.t_start, grid.dt(), out.exit)?,
        field: out.field,
        coherence: out.coherence,
        energy: out.energy,
    })
}
