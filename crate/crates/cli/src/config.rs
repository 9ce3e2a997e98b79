//! Run configuration: a single JSON document in normalized units.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gemqm::gem::{GemParams, RetrievalParams};
use gemqm::gfc::{GfcParams, Variant};
use gemqm::simulator::SimGrid;
use gemqm::{c64, Complex64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    GemStore,
    GemRecall,
    GfcRun,
    Compare,
    Sweep,
    SpecfunProbe,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub gem: Option<GemSpec>,
    #[serde(default)]
    pub gfc: Option<GfcSpec>,
    #[serde(default)]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Artifacts to write; empty means the mode's default set.
    #[serde(default)]
    pub outputs: Vec<Artifact>,
    #[serde(default)]
    pub metrics: MetricsSpec,
    #[serde(default)]
    pub compare: CompareSpec,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub probe: Option<ProbeSpec>,
    #[serde(default)]
    pub physical: Option<PhysicalUnits>,
    /// Independent variations of the base configuration, each written to
    /// its own subdirectory.
    #[serde(default)]
    pub cases: Vec<Case>,
}

/// Memory parameters with `L = T = 1`. Give either `mu` and `beta_l` or
/// `g_n2` and `beta`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GemSpec {
    pub mu: Option<f64>,
    pub beta_l: Option<f64>,
    pub g_n2: Option<f64>,
    pub beta: Option<f64>,
    #[serde(default)]
    pub gamma: f64,
    /// Frequency shift; ignored when `centred` is set.
    #[serde(default)]
    pub omega_m: f64,
    /// Use `ω_m = βL/2`.
    #[serde(default)]
    pub centred: bool,
    #[serde(default)]
    pub retrieval: RetrievalSpec,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RetrievalSpec {
    #[default]
    Symmetric,
    Continued,
    Custom { beta: f64, omega_m: f64, g_n2: f64 },
}

/// Comb parameters with `T0 = d = 1`. Give either `thickness`
/// (`|g|²N d T0`) or `mu`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GfcSpec {
    pub variant: Variant,
    pub teeth: usize,
    /// `𝓕 = δω/2γ`; omitted for a lossless comb.
    pub finesse: Option<f64>,
    pub finesse_geom: f64,
    pub thickness: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InputSpec {
    Gaussian {
        t_in: Option<f64>,
        t_in_s: Option<f64>,
        fwhm: Option<f64>,
        fwhm_s: Option<f64>,
    },
    Expdecay {
        t_in: f64,
    },
    DeltaApprox {
        t_in: f64,
        width: f64,
    },
    SamplesFile {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nz: usize,
    pub nt: Option<usize>,
    pub dt: Option<f64>,
    pub t_start: f64,
    pub t_end: f64,
    /// Keep every `record_stride`-th time step of recorded lattices.
    #[serde(default = "one")]
    pub record_stride: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Artifact {
    Input,
    Output,
    Leakage,
    Echo,
    Field,
    Coherence,
    Transfer,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSpec {
    /// Reference time for fidelity; omitted means 0, `"auto"` optimizes.
    #[serde(default)]
    pub t_bar: TBarSpec,
    /// Number of comb echoes to partition.
    #[serde(default = "five")]
    pub echoes: usize,
}

fn five() -> usize {
    5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TBarSpec {
    Fixed(f64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for TBarSpec {
    fn default() -> Self {
        TBarSpec::Fixed(0.0)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSpec {
    /// Field slices, as positions in `[−L/2, L/2]`.
    pub z_slices: Option<Vec<f64>>,
    /// Coherence profiles at these times.
    pub t_slices: Option<Vec<f64>>,
    /// Points across the medium for coherence profiles.
    pub z_points: Option<usize>,
    /// Also compare the recalled echo for inputs without a closed form.
    #[serde(default)]
    pub echo: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub evaluate: SweepEval,
    pub axes: Vec<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepEval {
    /// Memory simulation with efficiency, fidelity and amplitude preservation.
    GemRecall,
    /// Comb simulation with per-echo efficiencies.
    GfcRun,
    /// Closed-form comb echo efficiencies.
    GfcFormula,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    /// Dotted path of a config field, e.g. `gfc.mu`.
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let s = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.min + s * (self.max - self.min),
                    Scale::Log => (self.min.ln() + s * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub function: ProbeFunction,
    #[serde(default)]
    pub args: BTreeMap<String, CNum>,
    /// Evaluate over `t` instead of at a single point.
    pub t: Option<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeFunction {
    /// `Φ2(alpha, alpha_p; nu; x, y)`.
    Phi2,
    /// `1F1(a; b; z)`.
    Kummer1f1,
    BesselJ0,
    BesselJ1,
    J1Tilde,
    LogGamma,
    Gamma,
    /// `e^{−iβLt/2} 1F1(iμ+1; 2; iβLt)` and `J̃1(|g|²NLt)` over `t`, with
    /// `g_n2_l` and `beta_l`.
    StorageResponse,
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CNum {
    Real(f64),
    Pair([f64; 2]),
}

impl CNum {
    pub fn value(self) -> Complex64 {
        match self {
            CNum::Real(x) => c64(x, 0.0),
            CNum::Pair([a, b]) => c64(a, b),
        }
    }
}

/// Physical scale of the normalized units. Converted on ingest; the
/// values are also echoed into the report.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalUnits {
    /// Seconds per normalized time unit (`T` or `T0`).
    pub time_unit_s: f64,
    /// `|g|²N` in m⁻¹s⁻¹, used to derive lengths.
    pub g_n2_per_m_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub name: String,
    /// Dotted config paths and the values to put there.
    pub set: BTreeMap<String, Value>,
}

/// Parses and validates a config document. `base` resolves relative file
/// paths.
pub fn parse(value: &Value, base: &Path) -> CliResult<RunConfig> {
    let cfg: RunConfig = serde_path_to_error::deserialize(value.clone())
        .map_err(|e| CliError::Validation(format!("{}: {}", e.path(), e.inner())))?;
    let mut cfg = cfg;
    if let Some(InputSpec::SamplesFile { path }) = &mut cfg.input {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Sets a dotted path inside a JSON document. Intermediate objects must
/// exist; the leaf may be new, and is then checked by re-parsing.
pub fn set_path(doc: &mut Value, path: &str, v: Value) -> CliResult<()> {
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| CliError::Validation(format!("{path}: `{}` is not an object", parts[..i].join("."))))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), v);
            return Ok(());
        }
        cur = obj
            .get_mut(*part)
            .ok_or_else(|| CliError::Validation(format!("{path}: no `{}` block", parts[..=i].join("."))))?;
    }
    unreachable!()
}

fn bad<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        let physics = self.gem.is_some() as u8 + self.gfc.is_some() as u8;
        match self.mode {
            Mode::SpecfunProbe => {
                if physics != 0 || self.probe.is_none() {
                    return bad("specfun-probe takes a `probe` block and no physics block");
                }
            }
            _ => {
                if physics != 1 {
                    return bad("exactly one of `gem` and `gfc` is required");
                }
            }
        }
        let needs_gem = matches!(self.mode, Mode::GemStore | Mode::GemRecall | Mode::Compare);
        if needs_gem && self.gem.is_none() {
            return bad(format!("mode {:?} needs a `gem` block", self.mode));
        }
        if self.mode == Mode::GfcRun && self.gfc.is_none() {
            return bad("gfc-run needs a `gfc` block");
        }
        if let Some(g) = &self.gem {
            g.params()?.check().map_err(|e| CliError::Validation(format!("gem: {e}")))?;
        }
        if let Some(g) = &self.gfc {
            g.params()?.check().map_err(|e| CliError::Validation(format!("gfc: {e}")))?;
        }
        if let Some(InputSpec::SamplesFile { path }) = &self.input {
            if !path.is_file() {
                return bad(format!("input.path: {} does not exist", path.display()));
            }
        }
        if let Some(g) = &self.grid {
            g.sim_grid()?;
        }
        if matches!(self.mode, Mode::GemStore | Mode::GemRecall | Mode::Compare | Mode::GfcRun) {
            if self.input.is_none() || self.grid.is_none() {
                return bad("`input` and `grid` are required for simulation modes");
            }
            self.input_spec_times()?;
        }
        if self.mode == Mode::Sweep {
            let s = self.sweep.as_ref().ok_or_else(|| CliError::Validation("sweep: block is required".into()))?;
            if s.axes.is_empty() {
                return bad("sweep.axes: at least one axis is required");
            }
            for (i, a) in s.axes.iter().enumerate() {
                if a.count == 0 || !a.min.is_finite() || !a.max.is_finite() {
                    return bad(format!("sweep.axes[{i}]: count must be positive and bounds finite"));
                }
                if a.scale == Scale::Log && !(a.min > 0.0 && a.max > 0.0) {
                    return bad(format!("sweep.axes[{i}]: log axis needs positive bounds"));
                }
            }
            let ok = match s.evaluate {
                SweepEval::GemRecall => self.gem.is_some() && self.grid.is_some() && self.input.is_some(),
                SweepEval::GfcRun => self.gfc.is_some() && self.grid.is_some() && self.input.is_some(),
                SweepEval::GfcFormula => self.gfc.is_some(),
            };
            if !ok {
                return bad("sweep.evaluate: the configuration lacks the blocks this evaluation needs");
            }
        }
        if let Some(p) = &self.physical {
            if !(p.time_unit_s > 0.0) {
                return bad("physical.time_unit_s must be positive");
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for (i, c) in self.cases.iter().enumerate() {
            let safe = !c.name.is_empty() && c.name.chars().all(|ch| ch.is_ascii_alphanumeric() || "-_.".contains(ch));
            if !safe || c.name.starts_with('.') {
                return bad(format!("cases[{i}].name: use letters, digits, '-', '_' or '.'"));
            }
            if !names.insert(&c.name) {
                return bad(format!("cases[{i}].name: duplicate `{}`", c.name));
            }
        }
        Ok(())
    }

    /// Input timing in normalized units, converting `*_s` fields.
    pub fn input_spec_times(&self) -> CliResult<Option<(f64, f64)>> {
        let Some(InputSpec::Gaussian { t_in, t_in_s, fwhm, fwhm_s }) = &self.input else {
            return Ok(None);
        };
        let unit = self.physical.map(|p| p.time_unit_s);
        let pick = |name: &str, norm: Option<f64>, si: Option<f64>| -> CliResult<f64> {
            match (norm, si, unit) {
                (Some(v), None, _) => Ok(v),
                (None, Some(v), Some(u)) => Ok(v / u),
                (None, Some(_), None) => bad(format!("input.{name}_s needs physical.time_unit_s")),
                _ => bad(format!("input: give exactly one of `{name}` and `{name}_s`")),
            }
        };
        let t = pick("t_in", *t_in, *t_in_s)?;
        let w = pick("fwhm", *fwhm, *fwhm_s)?;
        if !(w > 0.0) {
            return bad("input.fwhm must be positive");
        }
        Ok(Some((t, w)))
    }
}

impl GemSpec {
    pub fn params(&self) -> CliResult<GemParams> {
        let p = match (self.mu, self.beta_l, self.g_n2, self.beta) {
            (Some(mu), Some(bl), None, None) => GemParams::from_mu(mu, bl),
            (None, None, Some(g), Some(b)) => GemParams::normalized(g, b),
            _ => return bad("gem: give either `mu` and `beta_l` or `g_n2` and `beta`"),
        };
        let p = p.with_gamma(self.gamma).with_omega_m(self.omega_m);
        Ok(if self.centred { p.centred() } else { p })
    }

    pub fn retrieval(&self) -> CliResult<RetrievalParams> {
        let p = self.params()?;
        let r = match self.retrieval {
            RetrievalSpec::Symmetric => RetrievalParams::symmetric(&p),
            RetrievalSpec::Continued => RetrievalParams::continued(&p),
            RetrievalSpec::Custom { beta, omega_m, g_n2 } => RetrievalParams { beta, omega_m, g_n2 },
        };
        r.check().map_err(|e| CliError::Validation(format!("gem.retrieval: {e}")))?;
        Ok(r)
    }
}

impl GfcSpec {
    pub fn params(&self) -> CliResult<GfcParams> {
        let f = self.finesse.unwrap_or(f64::INFINITY);
        if !(f > 0.0) {
            return bad("gfc.finesse must be positive");
        }
        match (self.thickness, self.mu) {
            (Some(x), None) => Ok(GfcParams::normalized(self.variant, self.teeth, f, self.finesse_geom, x)),
            (None, Some(mu)) => Ok(GfcParams::from_mu(self.variant, self.teeth, f, self.finesse_geom, mu)),
            _ => bad("gfc: give exactly one of `thickness` and `mu`"),
        }
    }
}

impl GridSpec {
    pub fn sim_grid(&self) -> CliResult<SimGrid> {
        let span = self.t_end - self.t_start;
        let nt = match (self.nt, self.dt) {
            (Some(n), None) => n,
            (None, Some(dt)) if dt > 0.0 => {
                let n = span / dt;
                if (n - n.round()).abs() > 1e-6 * n.max(1.0) {
                    return bad("grid.dt must divide t_end − t_start");
                }
                n.round() as usize + 1
            }
            _ => return bad("grid: give exactly one of `nt` and a positive `dt`"),
        };
        if self.record_stride == 0 {
            return bad("grid.record_stride must be at least 1");
        }
        SimGrid::new(self.nz, nt, self.t_start, self.t_end).map_err(|e| CliError::Validation(format!("grid: {e}")))
    }
}
