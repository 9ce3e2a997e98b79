//! JSON report and manifest.

use std::collections::BTreeMap;

use gemqm::gfc::OptimizationReport;
use gemqm::metrics::{EchoWindow, MetricsReport};
use gemqm::simulator::EnergyBudget;
use serde::{Deserialize, Serialize};

use crate::config::Mode;

/// Bumped whenever the report layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub mode: Mode,
    pub config_hash: String,
    pub tolerance_profile: String,
    pub cases: Vec<CaseReport>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    /// Artifact paths relative to the output directory.
    pub artifacts: Vec<String>,
    pub groups: Groups,
    pub energy: Option<EnergyBudget>,
    pub metrics: Option<MetricsReport>,
    /// Overlap with the reversed input stretched by `stretch`, reported
    /// when the retrieval gradient differs in magnitude.
    pub stretched_fidelity: Option<Stretched>,
    pub echoes: Option<Vec<EchoReport>>,
    pub optimization: Option<OptimizationReport>,
    /// Relative L2 deviations between routes, keyed by comparison.
    pub deviations: BTreeMap<String, f64>,
    pub convergence: Option<Convergence>,
    pub sweep: Option<SweepSummary>,
    pub probe: Option<ProbeValue>,
    pub warnings: Vec<String>,
}

/// Dimensionless groups of the run. Absent values do not apply or are
/// infinite.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Groups {
    pub mu: Option<f64>,
    pub beta_l: Option<f64>,
    /// Optical thickness `2|g|²NL/γ`.
    pub zeta: Option<f64>,
    /// Spectral finesse `δω/2γ`.
    pub finesse: Option<f64>,
    /// Geometric finesse `l0/d`.
    pub finesse_geom: Option<f64>,
    pub zeta_eff: Option<f64>,
    /// `|g|²N d T0`.
    pub tooth_depth: Option<f64>,
    pub period: Option<f64>,
    /// Tooth thickness in metres, when physical units are given.
    pub tooth_thickness_m: Option<f64>,
    pub time_unit_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Stretched {
    pub stretch: f64,
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EchoReport {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub energy: f64,
    /// Window energy over input energy.
    pub efficiency: f64,
    pub peak_time: f64,
    pub peak: [f64; 2],
    /// Amplitudes from the truncated echo expansion, echoes 1 to 5.
    pub predicted_first_five: Option<[f64; 2]>,
    /// Single-pass thin-medium amplitude.
    pub predicted_thin: Option<[f64; 2]>,
}

impl EchoReport {
    pub fn new(w: &EchoWindow, n_in: f64) -> Self {
        Self {
            index: w.index,
            start: w.start,
            end: w.end,
            energy: w.energy,
            efficiency: w.energy / n_in,
            peak_time: w.peak_time,
            peak: [w.peak.re, w.peak.im],
            predicted_first_five: None,
            predicted_thin: None,
        }
    }
}

/// Change of the primary output when both grid steps are halved.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Convergence {
    pub refinement: usize,
    pub rel_l2_change: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub evaluate: String,
    pub axes: Vec<String>,
    pub points: usize,
    pub columns: Vec<String>,
    /// Axis values and metrics at the largest value of the first metric.
    pub best: Vec<f64>,
    /// For (`gfc.finesse_geom`, `gfc.mu`) sweeps: largest distance, in μ
    /// cells, between each row maximum and the line `𝓕' = πμ`.
    pub ridge_offset_cells: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeValue {
    pub function: String,
    pub value: Option<[f64; 2]>,
    pub route: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactHash {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// The report plus everything that varies between otherwise identical
/// runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub timestamp: String,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub artifacts: Vec<ArtifactHash>,
    pub report: Report,
}
