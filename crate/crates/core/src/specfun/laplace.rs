use std::f64::consts::PI;

use num_complex::Complex64;

use super::sum::CSum;
use super::EvalControl;
use crate::error::{Error, Result};

type C = Complex64;

/// Inverse Laplace transform `f(t) = (1/2πi) ∫ e^{pt} F(p) dp` by the
/// trapezoid rule on a Talbot contour. `F` must be analytic off cuts that
/// run from its singularities towards `Re p = −∞` and those singularities
/// must lie near the non-positive real axis; otherwise use
/// [`inverse_laplace_hinted`].
pub fn inverse_laplace<F>(f: F, t: f64, ctl: &EvalControl) -> Result<C>
where
    F: Fn(C) -> C,
{
    inverse_laplace_hinted(f, t, &[C::new(0.0, 0.0)], ctl)
}

/// Inverse Laplace transform for a transform whose branch points or poles
/// are listed in `singularities`, each with a horizontal cut to the left
/// (principal powers of `p − s_j`). Singularities are grouped by their
/// imaginary parts; every group gets its own Talbot contour confined to a
/// horizontal band that excludes the other groups' cuts, which avoids the
/// cancellation a single contour around widely spread points suffers.
pub fn inverse_laplace_hinted<F>(f: F, t: f64, singularities: &[C], ctl: &EvalControl) -> Result<C>
where
    F: Fn(C) -> C,
{
    ctl.check()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("inversion time must be positive, got {t}")));
    }
    let groups = cluster(singularities, t);
    let tol = ctl.rel_tol.max(1e-10);
    let mut n = 2 * (ctl.quad_points.max(16) / 2);
    let mut prev: Option<C> = None;
    let n_max = 16 * 1024;
    while n <= n_max {
        let mut acc = CSum::default();
        let mut noise = 0.0;
        for g in &groups {
            let (v, r) = g.integrate(&f, t, n);
            acc.add(v);
            noise += r;
        }
        let v = acc.value();
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::ContourFailure(format!("non-finite sum with {n} nodes")));
        }
        if let Some(p) = prev {
            let scale = v.norm().max(p.norm());
            if (v - p).norm() <= (tol * scale).max(64.0 * noise) || (v - p).norm() <= 1e-300 {
                return Ok(v);
            }
        }
        prev = Some(v);
        n = (n * 3 / 4) * 2;
    }
    Err(Error::ContourFailure(format!("no agreement between node counts up to {n_max}")))
}

#[derive(Debug, Clone, Copy)]
struct Group {
    lo: f64,
    hi: f64,
    re: f64,
    band: f64,
}

impl Group {
    // Returns the contour integral and its rounding-noise estimate. `n` is
    // even so no node sits at θ = 0.
    fn integrate<F: Fn(C) -> C>(&self, f: &F, t: f64, n: usize) -> (C, f64) {
        let half = 0.5 * (self.hi - self.lo);
        let centre = C::new(self.re, 0.5 * (self.hi + self.lo));
        let mut lambda = (n as f64 / (5.0 * t)).min(12.0 / t);
        if self.band.is_finite() {
            lambda = lambda.min(self.band / PI);
        }
        let nu = (1.2 * 3.0 * half / (PI * lambda)).max(1.0);
        let mut acc = CSum::default();
        let dth = 2.0 * PI / n as f64;
        for k in 0..n {
            let th = -PI + (k as f64 + 0.5) * dth;
            let (s, c) = th.sin_cos();
            let cot = c / s;
            let p = centre + lambda * C::new(th * cot, nu * th);
            let dp = lambda * C::new(cot - th / (s * s), nu);
            let e = (p * t).exp();
            if e.norm() < 1e-300 {
                continue;
            }
            let v = e * f(p) * dp;
            if v.re.is_finite() && v.im.is_finite() {
                acc.add(v);
            }
        }
        let w = dth / (2.0 * PI);
        (acc.value() * C::new(0.0, -w), acc.max_term * w * f64::EPSILON * n as f64)
    }
}

fn cluster(points: &[C], t: f64) -> Vec<Group> {
    let mut pts: Vec<C> = points.to_vec();
    if pts.is_empty() {
        pts.push(C::new(0.0, 0.0));
    }
    pts.sort_by(|a, b| a.im.total_cmp(&b.im));
    let mut groups: Vec<Group> =
        pts.iter().map(|p| Group { lo: p.im, hi: p.im, re: p.re, band: f64::INFINITY }).collect();
    loop {
        let mut merged = false;
        let mut i = 0;
        while i + 1 < groups.len() {
            let (a, b) = (groups[i], groups[i + 1]);
            let gap = b.lo - a.hi;
            let need = 10.0 * (0.5 * (a.hi - a.lo)).max(0.5 * (b.hi - b.lo)) + 12.0 / t;
            if gap < need {
                groups[i] = Group { lo: a.lo, hi: b.hi, re: a.re.max(b.re), band: f64::INFINITY };
                groups.remove(i + 1);
                merged = true;
            } else {
                i += 1;
            }
        }
        if !merged {
            break;
        }
    }
    let m = groups.len();
    for i in 0..m {
        let below = if i > 0 { groups[i].lo - groups[i - 1].hi } else { f64::INFINITY };
        let above = if i + 1 < m { groups[i + 1].lo - groups[i].hi } else { f64::INFINITY };
        groups[i].band = 0.45 * below.min(above);
    }
    groups
}
