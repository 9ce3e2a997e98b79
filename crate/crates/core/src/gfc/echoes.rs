use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{GfcParams, Variant};
use crate::error::{invalid, Result};
use crate::specfun::{j1_tilde, kummer_1f1, EvalControl};

type C = Complex64;

/// Output written as `leakage · a_in(t) + Σ_n echoes[n−1] · a_in(t − nT0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoSeries {
    pub leakage: C,
    pub echoes: Vec<C>,
    /// Set when the coefficients were produced outside the regime they
    /// were derived for.
    pub out_of_domain: bool,
}

impl EchoSeries {
    pub fn efficiencies(&self) -> Vec<f64> {
        self.echoes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Single-pass echo train: every tooth sees only the undisturbed input.
/// Flagged out of domain when `|g|²N d T0 > 1`.
pub fn thin_echo_amplitudes(p: &GfcParams, n_max: usize) -> Result<EchoSeries> {
    p.check()?;
    let x = p.tooth_depth();
    let t0 = p.period();
    let ctl = EvalControl::default();
    let mut echoes = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let decay = (-p.gamma * nf * t0).exp();
        let shape = match p.variant {
            Variant::Stepwise => C::new(j1_tilde(x * nf), 0.0),
            Variant::Discontinuous => {
                let b = p.beta();
                let bd = b * p.thickness * nf * t0;
                let mu = p.g_n2 / b;
                let f = kummer_1f1(C::new(1.0, mu), C::new(2.0, 0.0), C::new(0.0, bd), &ctl)?;
                C::from_polar(1.0, -0.5 * bd) * f
            }
        };
        echoes.push(-x * decay * shape);
    }
    Ok(EchoSeries { leakage: C::new(1.0 - 0.5 * x, 0.0), echoes, out_of_domain: x > 1.0 })
}

// log-series coefficients a_n of the periodic comb response, a(ω) =
// a_in(ω) e^{−a_0} exp(−Σ a_n e^{iωnT0})
fn log_series(p: &GfcParams, n_max: usize) -> (f64, Vec<f64>) {
    let r = (-p.gamma * p.period()).exp();
    match p.variant {
        Variant::Stepwise => {
            let x = p.tooth_depth();
            (0.5 * x, (1..=n_max).map(|n| x * r.powi(n as i32)).collect())
        }
        Variant::Discontinuous => {
            let mu = p.mu();
            let fp = p.finesse_geom();
            let a = (1..=n_max)
                .map(|n| {
                    let nf = n as f64;
                    2.0 * mu / nf * (nf * PI / fp).sin() * r.powi(n as i32)
                })
                .collect();
            (PI * mu / fp, a)
        }
    }
}

/// Echo coefficients of the infinite periodic comb to any order, by
/// exponentiating the log-series of the response. Decay enters every
/// harmonic as `e^{−γnT0}` for both variants.
pub fn echo_series(p: &GfcParams, n_max: usize) -> Result<EchoSeries> {
    p.check()?;
    let (a0, a) = log_series(p, n_max);
    let mut b = vec![1.0f64; n_max + 1];
    for k in 1..=n_max {
        let s: f64 = (1..=k).map(|j| j as f64 * a[j - 1] * b[k - j]).sum();
        b[k] = -s / k as f64;
    }
    let pref = (-a0).exp();
    Ok(EchoSeries {
        leakage: C::new(pref, 0.0),
        echoes: b[1..].iter().map(|v| C::new(pref * v, 0.0)).collect(),
        out_of_domain: false,
    })
}

/// Leakage and first five echoes in the printed closed form. The
/// discontinuous comb is taken at `γ → 0`; the stepwise comb keeps the
/// `e^{−nπ/𝓕}` factors.
pub fn first_five_echoes(p: &GfcParams) -> Result<EchoSeries> {
    p.check()?;
    let mu = p.mu();
    let fp = p.finesse_geom();
    let c = match p.variant {
        Variant::Discontinuous => {
            let s = |k: f64| (k * PI / fp).sin();
            let (s1, s2, s3, s4, s5) = (s(1.0), s(2.0), s(3.0), s(4.0), s(5.0));
            let (m2, m3, m4, m5) = (mu * mu, mu.powi(3), mu.powi(4), mu.powi(5));
            let pref = (-PI * mu / fp).exp();
            [
                1.0,
                -2.0 * mu * s1,
                -mu * s2 + 2.0 * m2 * s1 * s1,
                -2.0 * mu / 3.0 * s3 + 2.0 * m2 * s1 * s2 - 4.0 * m3 / 3.0 * s1.powi(3),
                -mu / 2.0 * s4 + m2 / 2.0 * s2 * s2 + 4.0 * m2 / 3.0 * s1 * s3 - 2.0 * m3 * s1 * s1 * s2
                    + 2.0 * m4 / 3.0 * s1.powi(4),
                -2.0 * mu / 5.0 * s5 + m2 * s1 * s4 + 2.0 * m2 / 3.0 * s2 * s3 - m3 * s1 * s2 * s2
                    - 4.0 * m3 / 3.0 * s1 * s1 * s3
                    + 4.0 * m4 / 3.0 * s1.powi(3) * s2
                    - 4.0 * m5 / 15.0 * s1.powi(5),
            ]
            .map(|v| v * pref)
        }
        Variant::Stepwise => {
            let x = 0.5 * PI * p.zeta_eff();
            let pref = (-0.25 * PI * p.zeta_eff()).exp();
            let f = p.finesse();
            let r = |n: f64| if f.is_infinite() { 1.0 } else { (-n * PI / f).exp() };
            let (x2, x3, x4, x5) = (x * x, x.powi(3), x.powi(4), x.powi(5));
            [
                1.0,
                -x * r(1.0),
                (-x + 0.5 * x2) * r(2.0),
                (-x + x2 - x3 / 6.0) * r(3.0),
                (-x + 1.5 * x2 - 0.5 * x3 + x4 / 24.0) * r(4.0),
                (-x + 2.0 * x2 - x3 + x4 / 6.0 - x5 / 120.0) * r(5.0),
            ]
            .map(|v| v * pref)
        }
    };
    Ok(EchoSeries {
        leakage: C::new(c[0], 0.0),
        echoes: c[1..].iter().map(|&v| C::new(v, 0.0)).collect(),
        out_of_domain: false,
    })
}

/// `(2μπ/𝓕')² e^{−2μπ/𝓕'}`.
pub fn eta_first_stepwise(mu: f64, finesse_geom: f64) -> f64 {
    let x = 2.0 * mu * PI / finesse_geom;
    x * x * (-x).exp()
}

/// `(πζ/2)² e^{−πζ/2}` in terms of the individual effective thickness.
pub fn eta_first_stepwise_zeta(zeta: f64) -> f64 {
    let x = 0.5 * PI * zeta;
    x * x * (-x).exp()
}

/// `4μ² sin²(π/𝓕') e^{−2μπ/𝓕'}`.
pub fn eta_first_discontinuous(mu: f64, finesse_geom: f64) -> f64 {
    let s = (PI / finesse_geom).sin();
    4.0 * mu * mu * s * s * (-2.0 * mu * PI / finesse_geom).exp()
}

/// The `μ` at which the discontinuous first echo, taken on the ridge
/// `𝓕' = πμ`, reaches `target` efficiency.
pub fn discontinuous_crossing(target: f64) -> Result<f64> {
    let f = |mu: f64| eta_first_discontinuous(mu, PI * mu);
    let (mut lo, mut hi) = (1.0 / PI, 1e8);
    if !(target > f(lo) && target < 4.0 * (-2.0f64).exp()) {
        return invalid(format!("efficiency {target} is not reached on the ridge"));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Diagnostics of the first-echo optimum conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub eta_first: f64,
    pub mu: f64,
    pub finesse: f64,
    pub finesse_geom: f64,
    /// `𝓕 ≫ 1`, taken as `𝓕 ≥ 10`.
    pub high_finesse: bool,
    /// `Δt < T0 < MΔt`.
    pub resolvable: bool,
    /// `μπ = 𝓕'` within 5%.
    pub on_ridge: bool,
    /// `μ ≳ 2`; always true for the stepwise comb.
    pub large_mu: bool,
}

pub fn optimization_report(p: &GfcParams, fwhm: f64) -> Result<OptimizationReport> {
    p.check()?;
    let mu = p.mu();
    let fp = p.finesse_geom();
    let t0 = p.period();
    let eta_first = match p.variant {
        Variant::Discontinuous => eta_first_discontinuous(mu, fp),
        Variant::Stepwise => eta_first_stepwise(mu, fp),
    };
    Ok(OptimizationReport {
        eta_first,
        mu,
        finesse: p.finesse(),
        finesse_geom: fp,
        high_finesse: p.finesse() >= 10.0,
        resolvable: fwhm < t0 && t0 < p.teeth as f64 * fwhm,
        on_ridge: (mu * PI / fp - 1.0).abs() <= 0.05,
        large_mu: p.variant == Variant::Stepwise || mu >= 2.0,
    })
}
