//! Mode dispatch: one case at a time, each into its own directory.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use gemqm::gem::{retrieval_echo, storage_evolve, storage_output, ExpDecayInput, GemParams, RetrievalParams};
use gemqm::gfc::{
    eta_first_discontinuous, eta_first_stepwise, first_five_echoes, optimization_report, propagate_via_transfer,
    thin_echo_amplitudes, GfcParams, Variant,
};
use gemqm::grid::{rel_l2, rel_l2_abs, Lattice, Waveform};
use gemqm::metrics::{echo_partition, evaluate, stretched_fidelity, TBar};
use gemqm::simulator::{simulate_gem, simulate_gfc, GemRun, SimGrid, SimOptions};
use gemqm::specfun::{
    bessel_j0, bessel_j1, gamma, humbert_phi2, j1_tilde, kummer_1f1, kummer_1f1_with, log_gamma, Phi2Args,
};
use gemqm::{c64, Complex64 as C, EvalControl};
use serde_json::Value;

use crate::config::{self, Artifact, InputSpec, Mode, ProbeFunction, RunConfig, SweepEval, TBarSpec};
use crate::error::{CliError, CliResult};
use crate::io::{emit_grid_csv, emit_table_csv, emit_waveform_csv};
use crate::report::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Fast,
    Strict,
}

impl Profile {
    pub fn control(self) -> EvalControl {
        match self {
            Profile::Fast => EvalControl { rel_tol: 1e-10, ..EvalControl::default() },
            Profile::Strict => EvalControl::default().validating(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Fast => "fast",
            Profile::Strict => "strict",
        }
    }
}

/// Everything a case needs besides its configuration.
pub struct Case<'a> {
    pub name: String,
    pub cfg: RunConfig,
    /// Configuration document the case was parsed from.
    pub doc: Value,
    pub base: &'a Path,
    pub out_dir: &'a Path,
    /// Subdirectory under `out_dir`, empty for a single run.
    pub sub: String,
    pub profile: Profile,
}

impl Case<'_> {
    fn path(&self, file: &str) -> (PathBuf, String) {
        if self.sub.is_empty() {
            (self.out_dir.join(file), file.to_string())
        } else {
            (self.out_dir.join(&self.sub).join(file), format!("{}/{file}", self.sub))
        }
    }

    fn wants(&self, a: Artifact, default: &[Artifact]) -> bool {
        if self.cfg.outputs.is_empty() {
            default.contains(&a)
        } else {
            self.cfg.outputs.contains(&a)
        }
    }

    fn units(&self) -> String {
        let base = if self.cfg.gfc.is_some() {
            "time in units of the comb period T0, z in units of the tooth thickness d (tooth 0 centred at 0)"
        } else {
            "time in units of the storage window T, z in units of the medium length L from the entrance"
        };
        match self.cfg.physical {
            Some(p) => format!("{base}; time unit {} s", p.time_unit_s),
            None => base.to_string(),
        }
    }

    fn wave(&self, file: &str, w: &Waveform, rep: &mut CaseReport) -> CliResult<()> {
        let (path, rel) = self.path(file);
        emit_waveform_csv(&path, w, &self.units())?;
        rep.artifacts.push(rel);
        Ok(())
    }

    fn lattice(&self, file: &str, g: &Lattice, rep: &mut CaseReport) -> CliResult<()> {
        let (path, rel) = self.path(file);
        emit_grid_csv(&path, g, &self.units())?;
        rep.artifacts.push(rel);
        Ok(())
    }

    fn grid(&self) -> CliResult<SimGrid> {
        self.cfg.grid.as_ref().expect("validated").sim_grid()
    }

    fn sim_options(&self, record: bool) -> SimOptions {
        let stride = self.cfg.grid.map_or(1, |g| g.record_stride);
        SimOptions { record_stride: if record { stride } else { 0 }, ..SimOptions::default() }
    }

    fn t_bar(&self) -> TBar {
        match self.cfg.metrics.t_bar {
            TBarSpec::Fixed(t) => TBar::Fixed(t),
            TBarSpec::Auto(_) => TBar::Auto,
        }
    }
}

pub fn run_case(case: &Case) -> CliResult<CaseReport> {
    if !case.sub.is_empty() {
        let dir = case.out_dir.join(&case.sub);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    }
    let mut rep = CaseReport { name: case.name.clone(), groups: groups(&case.cfg)?, ..Default::default() };
    match case.cfg.mode {
        Mode::GemStore => gem_store(case, &mut rep)?,
        Mode::GemRecall => gem_recall(case, &mut rep)?,
        Mode::Compare => compare(case, &mut rep)?,
        Mode::GfcRun => gfc_run(case, &mut rep)?,
        Mode::Sweep => sweep(case, &mut rep)?,
        Mode::SpecfunProbe => probe(case, &mut rep)?,
    }
    Ok(rep)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn groups(cfg: &RunConfig) -> CliResult<Groups> {
    let mut g = Groups { time_unit_s: cfg.physical.map(|p| p.time_unit_s), ..Default::default() };
    if let Some(s) = &cfg.gem {
        let p = s.params()?;
        g.mu = finite(p.mu());
        g.beta_l = Some(p.beta * p.length);
        g.zeta = finite(2.0 * p.g_n2 * p.length / p.gamma);
    }
    if let Some(s) = &cfg.gfc {
        let p = s.params()?;
        g.mu = finite(p.mu());
        g.beta_l = Some(p.bandwidth());
        g.finesse = finite(p.finesse());
        g.finesse_geom = Some(p.finesse_geom());
        g.zeta_eff = Some(p.zeta_eff());
        g.tooth_depth = Some(p.tooth_depth());
        g.period = Some(p.period());
        if let Some(u) = cfg.physical {
            if let Some(g_si) = u.g_n2_per_m_s {
                // |g|²N d T0 with T0 and |g|²N in SI units
                g.tooth_thickness_m = Some(p.tooth_depth() / (g_si * u.time_unit_s * p.period()));
            }
        }
    }
    Ok(g)
}

fn unit_area_gaussian(t_in: f64, width: f64, t0: f64, t1: f64, n: usize) -> CliResult<Waveform> {
    let g = Waveform::gaussian(t_in, width, t0, t1, n)?;
    let area = width * (PI / (4.0 * std::f64::consts::LN_2)).sqrt();
    Ok(Waveform::new(g.t0, g.dt, g.samples.iter().map(|v| v / area).collect())?)
}

/// Input on the grid nodes of `[t0, t1]`.
fn input_on(cfg: &RunConfig, gem: Option<&GemParams>, t0: f64, t1: f64, dt: f64) -> CliResult<Waveform> {
    let n = ((t1 - t0) / dt).round() as usize + 1;
    match cfg.input.as_ref().expect("validated") {
        InputSpec::Gaussian { .. } => {
            let (t_in, fwhm) = cfg.input_spec_times()?.expect("gaussian");
            Ok(Waveform::gaussian(t_in, fwhm, t0, t1, n)?)
        }
        InputSpec::Expdecay { t_in } => {
            let p = gem.ok_or_else(|| CliError::Validation("input.kind expdecay needs a `gem` block".into()))?;
            let x = ExpDecayInput { t_in: *t_in };
            Ok(Waveform::from_fn(t0, t1, n, |t| x.input(p, t))?)
        }
        InputSpec::DeltaApprox { t_in, width } => {
            if !(*width > 0.0) {
                return Err(CliError::Validation("input.width must be positive".into()));
            }
            unit_area_gaussian(*t_in, *width, t0, t1, n)
        }
        InputSpec::SamplesFile { path } => crate::io::read_waveform_csv(path),
    }
}

fn gem_input(case: &Case, p: &GemParams, grid: &SimGrid) -> CliResult<Waveform> {
    input_on(&case.cfg, Some(p), grid.t_start, 0.0, grid.dt())
}

fn exit_field(r: &GemRun) -> Vec<C> {
    let mut v = r.leakage.samples.clone();
    if r.echo.len() > 1 {
        v.extend_from_slice(&r.echo.samples[1..]);
    }
    v
}

fn every(v: &[C], k: usize) -> Vec<C> {
    v.iter().step_by(k).copied().collect()
}

fn gem_convergence(case: &Case, p: &GemParams, r: &RetrievalParams, a_in: &Waveform, base: &GemRun) -> CliResult<Option<Convergence>> {
    if case.profile != Profile::Strict {
        return Ok(None);
    }
    let fine = case.grid()?.refined(2);
    let run = simulate_gem(p, r, a_in, &fine, &SimOptions::unrecorded())?;
    let change = rel_l2(&exit_field(base), &every(&exit_field(&run), 2));
    Ok(Some(Convergence { refinement: 2, rel_l2_change: change }))
}

fn gem_store(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let spec = case.cfg.gem.as_ref().expect("validated");
    let (p, r) = (spec.params()?, spec.retrieval()?);
    let grid = case.grid()?;
    if grid.t_end != 0.0 {
        return Err(CliError::Validation("grid.t_end must be 0 for gem-store".into()));
    }
    let a_in = gem_input(case, &p, &grid)?;
    let default = [Artifact::Input, Artifact::Leakage, Artifact::Field, Artifact::Coherence];
    let record = case.wants(Artifact::Field, &default) || case.wants(Artifact::Coherence, &default);
    let run = simulate_gem(&p, &r, &a_in, &grid, &case.sim_options(record))?;
    if case.wants(Artifact::Input, &default) {
        case.wave("input.csv", &a_in, rep)?;
    }
    if case.wants(Artifact::Leakage, &default) {
        case.wave("leakage.csv", &run.leakage, rep)?;
    }
    if let (true, Some(f)) = (case.wants(Artifact::Field, &default), &run.field) {
        case.lattice("field.csv", f, rep)?;
    }
    if let (true, Some(c)) = (case.wants(Artifact::Coherence, &default), &run.coherence) {
        case.lattice("coherence.csv", c, rep)?;
    }
    rep.energy = Some(run.energy);
    rep.convergence = gem_convergence(case, &p, &r, &a_in, &run)?;
    Ok(())
}

fn gem_recall(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let spec = case.cfg.gem.as_ref().expect("validated");
    let (p, r) = (spec.params()?, spec.retrieval()?);
    let grid = case.grid()?;
    if !(grid.t_end > 0.0) {
        return Err(CliError::Validation("grid.t_end must be positive for gem-recall".into()));
    }
    let a_in = gem_input(case, &p, &grid)?;
    let default = [Artifact::Input, Artifact::Leakage, Artifact::Echo];
    let record = case.wants(Artifact::Field, &default) || case.wants(Artifact::Coherence, &default);
    let run = simulate_gem(&p, &r, &a_in, &grid, &case.sim_options(record))?;
    if case.wants(Artifact::Input, &default) {
        case.wave("input.csv", &a_in, rep)?;
    }
    if case.wants(Artifact::Leakage, &default) {
        case.wave("leakage.csv", &run.leakage, rep)?;
    }
    if case.wants(Artifact::Echo, &default) {
        case.wave("echo.csv", &run.echo, rep)?;
    }
    if let (true, Some(f)) = (case.wants(Artifact::Field, &default), &run.field) {
        case.lattice("field.csv", f, rep)?;
    }
    if let (true, Some(c)) = (case.wants(Artifact::Coherence, &default), &run.coherence) {
        case.lattice("coherence.csv", c, rep)?;
    }
    let m = evaluate(&a_in, &run.echo, case.t_bar())?;
    if r.beta.abs() != p.beta.abs() && r.beta != 0.0 {
        let stretch = (p.beta / r.beta).abs();
        rep.stretched_fidelity = Some(Stretched { stretch, fidelity: stretched_fidelity(&a_in, &run.echo, m.t_bar, stretch)? });
    }
    rep.metrics = Some(m);
    rep.energy = Some(run.energy);
    rep.convergence = gem_convergence(case, &p, &r, &a_in, &run)?;
    Ok(())
}

fn default_z_slices() -> Vec<f64> {
    vec![-0.5, -0.3, -0.1, 0.1, 0.3, 0.5]
}

fn default_t_slices() -> Vec<f64> {
    (1..=6).map(|k| -1.0 + k as f64 / 6.0).collect()
}

fn lattice_from_rows(z: Vec<f64>, t: Vec<f64>, rows: &[Vec<C>]) -> Lattice {
    let mut l = Lattice::zeros(z, t);
    for (iz, row) in rows.iter().enumerate() {
        for (it, v) in row.iter().enumerate() {
            l.set(iz, it, *v);
        }
    }
    l
}

fn compare(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let spec = case.cfg.gem.as_ref().expect("validated");
    let (p, r) = (spec.params()?, spec.retrieval()?);
    let grid = case.grid()?;
    let ctl = case.profile.control();
    let a_in = gem_input(case, &p, &grid)?;
    let run = simulate_gem(&p, &r, &a_in, &grid, &case.sim_options(true))?;
    let (field, coh) = (run.field.as_ref().expect("recorded"), run.coherence.as_ref().expect("recorded"));
    let opts = &case.cfg.compare;
    let z_slices: Vec<f64> = opts.z_slices.clone().unwrap_or_else(default_z_slices).iter().map(|z| z + 0.5 * p.length).collect();
    let t_slices = opts.t_slices.clone().unwrap_or_else(default_t_slices);
    let nzp = opts.z_points.unwrap_or(51).max(2);
    let z_prof: Vec<f64> = (0..nzp).map(|k| p.length * k as f64 / (nzp - 1) as f64).collect();
    if z_slices.iter().any(|z| !(0.0..=p.length).contains(z)) || t_slices.iter().any(|t| *t > 0.0 || *t < grid.t_start) {
        return Err(CliError::Validation("compare slices must lie inside the medium and the storage window".into()));
    }

    // numeric storage-time samples
    let t_store: Vec<f64> = field.t.iter().copied().filter(|&t| t <= 1e-12).collect();
    let num_field: Vec<Vec<C>> =
        z_slices.iter().map(|&z| field.row(field.nearest_z(z))[..t_store.len()].to_vec()).collect();
    let num_coh: Vec<Vec<C>> = t_slices
        .iter()
        .map(|&t| {
            let it = coh.nearest_t(t);
            z_prof.iter().map(|&z| coh.get(coh.nearest_z(z), it)).collect()
        })
        .collect();

    let expdecay = match case.cfg.input {
        Some(InputSpec::Expdecay { t_in }) => Some(ExpDecayInput { t_in }),
        _ => None,
    };
    let (an_field, an_coh): (Vec<Vec<C>>, Vec<Vec<C>>) = match expdecay {
        Some(x) => {
            let f = z_slices
                .iter()
                .map(|&z| t_store.iter().map(|&t| x.field(&p, z, t, &ctl)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let c = t_slices
                .iter()
                .map(|&t| z_prof.iter().map(|&z| x.coherence(&p, z, coh.t[coh.nearest_t(t)], &ctl)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            (f, c)
        }
        None => {
            let mut zs = z_slices.clone();
            zs.extend_from_slice(&z_prof);
            let sol = storage_evolve(&p, &a_in, &zs, &ctl)?;
            rep.warnings.extend(sol.warnings.iter().cloned());
            let f = (0..z_slices.len())
                .map(|iz| t_store.iter().map(|&t| sol.field.get(iz, sol.field.nearest_t(t))).collect())
                .collect();
            let c = t_slices
                .iter()
                .map(|&t| {
                    let it = sol.coherence.nearest_t(coh.t[coh.nearest_t(t)]);
                    (0..nzp).map(|k| sol.coherence.get(z_slices.len() + k, it)).collect()
                })
                .collect();
            (f, c)
        }
    };
    for (k, z) in z_slices.iter().enumerate() {
        rep.deviations.insert(format!("field_abs_z{:+.3}", z - 0.5 * p.length), rel_l2_abs(&num_field[k], &an_field[k]));
    }
    for (k, t) in t_slices.iter().enumerate() {
        rep.deviations.insert(format!("coherence_abs_t{t:+.3}"), rel_l2_abs(&num_coh[k], &an_coh[k]));
    }
    let worst = rep.deviations.values().copied().fold(0.0, f64::max);
    rep.deviations.insert("worst_storage".into(), worst);

    case.lattice("field_numeric.csv", &lattice_from_rows(z_slices.clone(), t_store.clone(), &num_field), rep)?;
    case.lattice("field_analytic.csv", &lattice_from_rows(z_slices.clone(), t_store.clone(), &an_field), rep)?;
    let tz: Vec<f64> = t_slices.iter().map(|&t| coh.t[coh.nearest_t(t)]).collect();
    let by_z = |rows: &[Vec<C>]| -> Vec<Vec<C>> { (0..nzp).map(|k| rows.iter().map(|r| r[k]).collect()).collect() };
    case.lattice("coherence_numeric.csv", &lattice_from_rows(z_prof.clone(), tz.clone(), &by_z(&num_coh)), rep)?;
    case.lattice("coherence_analytic.csv", &lattice_from_rows(z_prof.clone(), tz, &by_z(&an_coh)), rep)?;

    // exit field during storage and, if recalled, the echo
    let leak_an = match expdecay {
        Some(x) => {
            let v = run.leakage.times().iter().map(|&t| x.storage_output(&p, t, &ctl)).collect::<Result<Vec<_>, _>>()?;
            Waveform::new(run.leakage.t0, run.leakage.dt, v)?
        }
        None => storage_output(&p, &a_in, &ctl)?,
    };
    rep.deviations.insert("leakage".into(), rel_l2(&run.leakage.samples, &leak_an.samples));
    case.wave("leakage_numeric.csv", &run.leakage, rep)?;
    case.wave("leakage_analytic.csv", &leak_an, rep)?;
    if grid.t_end > 0.0 && run.echo.len() > 1 {
        let echo_an = match expdecay {
            Some(x) => {
                let v = run.echo.times().iter().map(|&t| x.echo(&p, &r, t, &ctl)).collect::<Result<Vec<_>, _>>()?;
                Some(Waveform::new(0.0, run.echo.dt, v)?)
            }
            None if opts.echo => Some(retrieval_echo(&p, &r, &a_in, &ctl)?),
            None => None,
        };
        if let Some(e) = echo_an {
            let num: Vec<C> = e.times().iter().map(|&t| run.echo.sample_at(t)).collect();
            rep.deviations.insert("echo".into(), rel_l2(&num, &e.samples));
            case.wave("echo_numeric.csv", &run.echo, rep)?;
            case.wave("echo_analytic.csv", &e, rep)?;
        }
        rep.metrics = Some(evaluate(&a_in, &run.echo, case.t_bar())?);
    }
    rep.energy = Some(run.energy);
    rep.convergence = gem_convergence(case, &p, &r, &a_in, &run)?;
    Ok(())
}

fn gfc_input(case: &Case, grid: &SimGrid) -> CliResult<Waveform> {
    input_on(&case.cfg, None, grid.t_start, grid.t_end, grid.dt())
}

fn echo_count(cfg: &RunConfig, origin: f64, period: f64, t_end: f64) -> usize {
    let fit = ((t_end - origin) / period - 0.5).floor();
    (cfg.metrics.echoes as f64).min(fit.max(0.0)) as usize
}

fn gfc_run(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let p = case.cfg.gfc.as_ref().expect("validated").params()?;
    let grid = case.grid()?;
    let a_in = gfc_input(case, &grid)?;
    let default = [Artifact::Input, Artifact::Output, Artifact::Transfer];
    let record = case.wants(Artifact::Field, &default) || case.wants(Artifact::Coherence, &default);
    let run = simulate_gfc(&p, &a_in, &grid, &case.sim_options(record))?;
    if case.wants(Artifact::Input, &default) {
        case.wave("input.csv", &a_in, rep)?;
    }
    if case.wants(Artifact::Output, &default) {
        case.wave("echo_train.csv", &run.output, rep)?;
    }
    if case.wants(Artifact::Transfer, &default) {
        let tf = propagate_via_transfer(&a_in, &p, grid.t_end)?;
        let n = tf.len().min(run.output.len());
        rep.deviations.insert("transfer_vs_simulation".into(), rel_l2(&run.output.samples[..n], &tf.samples[..n]));
        case.wave("transfer.csv", &tf, rep)?;
    }
    if let (true, Some(f)) = (case.wants(Artifact::Field, &default), &run.field) {
        case.lattice("field.csv", f, rep)?;
    }
    if let (true, Some(c)) = (case.wants(Artifact::Coherence, &default), &run.coherence) {
        case.lattice("coherence.csv", c, rep)?;
    }

    let origin = a_in.peak().0;
    let n_max = echo_count(&case.cfg, origin, p.period(), grid.t_end);
    let part = echo_partition(&run.output, origin, p.period(), n_max)?;
    let n_in = a_in.energy();
    let ff = first_five_echoes(&p)?;
    let thin = thin_echo_amplitudes(&p, n_max.max(1))?;
    let pair = |c: C| [c.re, c.im];
    let echoes = part
        .windows
        .iter()
        .map(|w| {
            let mut e = EchoReport::new(w, n_in);
            let k = w.index;
            e.predicted_first_five = if k == 0 { Some(pair(ff.leakage)) } else { ff.echoes.get(k - 1).map(|&c| pair(c)) };
            e.predicted_thin = if k == 0 { Some(pair(thin.leakage)) } else { thin.echoes.get(k - 1).map(|&c| pair(c)) };
            e
        })
        .collect();
    rep.echoes = Some(echoes);
    if thin.out_of_domain {
        rep.warnings.push("tooth optical thickness above 1: thin-medium amplitudes are outside their validity range".into());
    }
    if let Some((_, fwhm)) = case.cfg.input_spec_times()? {
        rep.optimization = Some(optimization_report(&p, fwhm)?);
    }
    rep.energy = Some(run.energy);
    if case.profile == Profile::Strict {
        let fine = grid.refined(2);
        let a_fine = gfc_input(case, &fine)?;
        let r2 = simulate_gfc(&p, &a_fine, &fine, &SimOptions::unrecorded())?;
        let change = rel_l2(&run.output.samples, &every(&r2.output.samples, 2));
        rep.convergence = Some(Convergence { refinement: 2, rel_l2_change: change });
    }
    Ok(())
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, vals| {
        acc.iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn sweep_point(case: &Case, params: &[String], point: &[f64]) -> CliResult<Vec<f64>> {
    let mut doc = case.doc.clone();
    for (name, &v) in params.iter().zip(point) {
        config::set_path(&mut doc, name, Value::from(v))?;
    }
    let cfg = config::parse(&doc, case.base).map_err(|e| match e {
        CliError::Validation(m) => CliError::Validation(format!("sweep point {point:?}: {m}")),
        other => other,
    })?;
    let ev = cfg.sweep.as_ref().expect("validated").evaluate;
    let n = cfg.metrics.echoes;
    match ev {
        SweepEval::GemRecall => {
            let spec = cfg.gem.as_ref().expect("validated");
            let (p, r) = (spec.params()?, spec.retrieval()?);
            let grid = cfg.grid.expect("validated").sim_grid()?;
            let a_in = input_on(&cfg, Some(&p), grid.t_start, 0.0, grid.dt())?;
            let run = simulate_gem(&p, &r, &a_in, &grid, &SimOptions::unrecorded())?;
            let tb = match cfg.metrics.t_bar {
                TBarSpec::Fixed(t) => TBar::Fixed(t),
                TBarSpec::Auto(_) => TBar::Auto,
            };
            let m = evaluate(&a_in, &run.echo, tb)?;
            Ok(vec![m.eta, m.fidelity.unwrap_or(f64::NAN), m.amp_preservation.unwrap_or(f64::NAN)])
        }
        SweepEval::GfcRun => {
            let p = cfg.gfc.as_ref().expect("validated").params()?;
            let grid = cfg.grid.expect("validated").sim_grid()?;
            let a_in = input_on(&cfg, None, grid.t_start, grid.t_end, grid.dt())?;
            let run = simulate_gfc(&p, &a_in, &grid, &SimOptions::unrecorded())?;
            let origin = a_in.peak().0;
            let part = echo_partition(&run.output, origin, p.period(), echo_count(&cfg, origin, p.period(), grid.t_end))?;
            let n_in = a_in.energy();
            let mut row = vec![first_echo_formula(&p)];
            row.extend((1..=n).map(|k| part.windows.get(k).map_or(f64::NAN, |w| w.energy / n_in)));
            Ok(row)
        }
        SweepEval::GfcFormula => {
            let p = cfg.gfc.as_ref().expect("validated").params()?;
            let ff = first_five_echoes(&p)?;
            let mut row = vec![first_echo_formula(&p), ff.leakage.norm_sqr()];
            row.extend(ff.efficiencies());
            Ok(row)
        }
    }
}

fn first_echo_formula(p: &GfcParams) -> f64 {
    match p.variant {
        Variant::Discontinuous => eta_first_discontinuous(p.mu(), p.finesse_geom()),
        Variant::Stepwise => eta_first_stepwise(p.mu(), p.finesse_geom()),
    }
}

fn metric_columns(ev: SweepEval, n: usize) -> Vec<String> {
    match ev {
        SweepEval::GemRecall => vec!["eta".into(), "fidelity".into(), "amp_preservation".into()],
        SweepEval::GfcRun => std::iter::once("eta_first_formula".to_string()).chain((1..=n).map(|k| format!("eta_{k}"))).collect(),
        SweepEval::GfcFormula => {
            std::iter::once("eta_first_formula".to_string()).chain((0..=5).map(|k| format!("eta_{k}"))).collect()
        }
    }
}

fn map_points<F>(points: &[Vec<f64>], f: F) -> Vec<CliResult<Vec<f64>>>
where
    F: Fn(&[f64]) -> CliResult<Vec<f64>> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|p| f(p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|p| f(p)).collect()
    }
}

fn sweep(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let spec = case.cfg.sweep.as_ref().expect("validated");
    let params: Vec<String> = spec.axes.iter().map(|a| a.param.clone()).collect();
    let values: Vec<Vec<f64>> = spec.axes.iter().map(|a| a.values()).collect();
    let points = cartesian(&values);
    let rows = map_points(&points, |pt| sweep_point(case, &params, pt));
    let mut table = Vec::with_capacity(points.len());
    for (pt, row) in points.iter().zip(rows) {
        let mut r = pt.clone();
        r.extend(row?);
        table.push(r);
    }
    let mut columns = params.clone();
    columns.extend(metric_columns(spec.evaluate, case.cfg.metrics.echoes));
    let (path, rel) = case.path("sweep.csv");
    emit_table_csv(&path, &format!("sweep over {}; {}", params.join(", "), case.units()), &columns, &table)?;
    rep.artifacts.push(rel);

    let k = params.len();
    let best = table
        .iter()
        .filter(|r| r[k].is_finite())
        .max_by(|a, b| a[k].total_cmp(&b[k]))
        .cloned()
        .unwrap_or_default();
    let ridge = ridge_offset(&params, &values, &table, k);
    rep.sweep = Some(SweepSummary {
        evaluate: serde_json::to_value(spec.evaluate).expect("enum").as_str().unwrap_or_default().to_string(),
        axes: params,
        points: table.len(),
        columns,
        best,
        ridge_offset_cells: ridge,
    });
    Ok(())
}

// Row maxima over μ at fixed 𝓕', measured against μ = 𝓕'/π in μ cells.
fn ridge_offset(params: &[String], values: &[Vec<f64>], table: &[Vec<f64>], metric: usize) -> Option<f64> {
    if params.len() != 2 {
        return None;
    }
    let fi = params.iter().position(|p| p == "gfc.finesse_geom")?;
    let mi = params.iter().position(|p| p == "gfc.mu")?;
    let mus = &values[mi];
    if mus.len() < 2 {
        return None;
    }
    let mut worst: f64 = 0.0;
    for &fp in &values[fi] {
        let row: Vec<&Vec<f64>> = table.iter().filter(|r| r[fi] == fp).collect();
        let best = row.iter().max_by(|a, b| a[metric].total_cmp(&b[metric]))?;
        let j = mus.iter().position(|&m| m == best[mi])?;
        let cell = if j + 1 < mus.len() { mus[j + 1] - mus[j] } else { mus[j] - mus[j - 1] };
        worst = worst.max((best[mi] - fp / PI).abs() / cell);
    }
    Some(worst)
}

fn arg(case: &Case, name: &str) -> CliResult<C> {
    let probe = case.cfg.probe.as_ref().expect("validated");
    probe
        .args
        .get(name)
        .map(|v| v.value())
        .ok_or_else(|| CliError::Validation(format!("probe.args.{name} is required")))
}

fn real_arg(case: &Case, name: &str) -> CliResult<f64> {
    let v = arg(case, name)?;
    if v.im != 0.0 {
        return Err(CliError::Validation(format!("probe.args.{name} must be real")));
    }
    Ok(v.re)
}

fn probe(case: &Case, rep: &mut CaseReport) -> CliResult<()> {
    let spec = case.cfg.probe.as_ref().expect("validated");
    let ctl = case.profile.control();
    let name = serde_json::to_value(spec.function).expect("enum").as_str().unwrap_or_default().to_string();
    let (value, route) = match spec.function {
        ProbeFunction::Phi2 => {
            let a = Phi2Args::new(arg(case, "alpha")?, arg(case, "alpha_p")?, arg(case, "nu")?, arg(case, "x")?, arg(case, "y")?);
            let (v, route) = humbert_phi2(&a, &ctl)?;
            (Some(v), Some(format!("{route:?}")))
        }
        ProbeFunction::Kummer1f1 => {
            let (v, route) = kummer_1f1_with(arg(case, "a")?, arg(case, "b")?, arg(case, "z")?, &ctl)?;
            (Some(v), Some(format!("{route:?}")))
        }
        ProbeFunction::BesselJ0 => (Some(c64(bessel_j0(real_arg(case, "x")?), 0.0)), None),
        ProbeFunction::BesselJ1 => (Some(c64(bessel_j1(real_arg(case, "x")?), 0.0)), None),
        ProbeFunction::J1Tilde => (Some(c64(j1_tilde(real_arg(case, "x")?), 0.0)), None),
        ProbeFunction::Gamma => (Some(gamma(arg(case, "z")?)?), None),
        ProbeFunction::LogGamma => (Some(log_gamma(arg(case, "z")?)?), None),
        ProbeFunction::StorageResponse => {
            let axis = spec
                .t
                .as_ref()
                .ok_or_else(|| CliError::Validation("probe.t is required for storage-response".into()))?;
            if axis.count < 2 {
                return Err(CliError::Validation("probe.t.count must be at least 2".into()));
            }
            let (gl, bl) = (real_arg(case, "g_n2_l")?, real_arg(case, "beta_l")?);
            if bl == 0.0 {
                return Err(CliError::Validation("probe.args.beta_l must be nonzero".into()));
            }
            let mu = gl / bl;
            let ts = axis.values();
            let k = ts
                .iter()
                .map(|&t| Ok(C::from_polar(1.0, -0.5 * bl * t) * kummer_1f1(c64(1.0, mu), c64(2.0, 0.0), c64(0.0, bl * t), &ctl)?))
                .collect::<CliResult<Vec<_>>>()?;
            let j: Vec<C> = ts.iter().map(|&t| c64(j1_tilde(gl * t), 0.0)).collect();
            let dt = ts[1] - ts[0];
            case.wave("storage_response.csv", &Waveform::new(ts[0], dt, k)?, rep)?;
            case.wave("j1_tilde.csv", &Waveform::new(ts[0], dt, j)?, rep)?;
            (None, None)
        }
    };
    rep.probe = Some(ProbeValue { function: name, value: value.map(|v| [v.re, v.im]), route });
    Ok(())
}
