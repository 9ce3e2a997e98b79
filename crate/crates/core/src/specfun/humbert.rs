use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::log_gamma;
use super::gauss::gauss_2f1_terminating;
use super::kummer::{cross_check, kummer_1f1};
use super::quad::tanh_sinh;
use super::ray::Confluent;
use super::sum::CSum;
use super::{is_nonpositive_int, EvalControl, Route};
use crate::error::{Error, Result};

type C = Complex64;

/// Arguments of the Humbert function
/// `Φ2(α, α'; ν; x, y) = Σ (α)_m (α')_n / ((ν)_{m+n} m! n!) x^m y^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phi2Args {
    pub alpha: C,
    pub alpha_p: C,
    pub nu: C,
    pub x: C,
    pub y: C,
}

impl Phi2Args {
    pub fn new(alpha: C, alpha_p: C, nu: C, x: C, y: C) -> Self {
        Self { alpha, alpha_p, nu, x, y }
    }

    fn check(&self) -> Result<()> {
        if is_nonpositive_int(self.nu) {
            return Err(Error::Pole("Φ2 lower parameter"));
        }
        Ok(())
    }

    fn system(&self) -> Confluent {
        Confluent::humbert(self.alpha, self.alpha_p, self.nu, self.x, self.y)
    }
}

/// Evaluates `Φ2`, choosing the series near the origin and the ray
/// continuation elsewhere. In validation mode a second route is run and
/// compared.
pub fn humbert_phi2(args: &Phi2Args, ctl: &EvalControl) -> Result<(C, Route)> {
    ctl.check()?;
    args.check()?;
    let zero = C::new(0.0, 0.0);
    if args.x == zero && args.y == zero {
        return Ok((C::new(1.0, 0.0), Route::Series));
    }
    let size = args.x.norm().max(args.y.norm());
    let sys = args.system();
    if size <= 12.0 {
        if let Ok(sv) = sys.series(1.0, ctl) {
            if sv.cancellation <= 0.01 * ctl.rel_tol {
                if ctl.validate {
                    let w = sys.along(&[1.0], ctl)?[0];
                    cross_check("Φ2", sv.state[0], w, ctl)?;
                }
                return Ok((sv.state[0], Route::Series));
            }
        }
    }
    let v = sys.along(&[1.0], ctl)?[0];
    if ctl.validate {
        let other = if size <= 20.0 {
            humbert_phi2_with(args, Route::Series, ctl)
        } else {
            humbert_phi2_with(args, Route::Integral, ctl)
        };
        if let Ok(w) = other {
            cross_check("Φ2", v, w, &EvalControl { rel_tol: ctl.rel_tol.max(1e-9), ..*ctl })?;
        }
    }
    Ok((v, Route::Ray))
}

/// Evaluates `Φ2` by the requested route.
pub fn humbert_phi2_with(args: &Phi2Args, route: Route, ctl: &EvalControl) -> Result<C> {
    ctl.check()?;
    args.check()?;
    match route {
        Route::Series => Ok(args.system().series(1.0, ctl)?.state[0]),
        Route::Ray => Ok(args.system().along(&[1.0], ctl)?[0]),
        Route::GaussExpansion => gauss_expansion(args, ctl),
        Route::Integral => integral(args, ctl).or_else(|e| {
            let swapped = Phi2Args::new(args.alpha_p, args.alpha, args.nu, args.y, args.x);
            match integral(&swapped, ctl) {
                Err(Error::RouteUnavailable(_)) => Err(e),
                other => other,
            }
        }),
    }
}

/// `Φ2(α, α'; ν; s_j x, s_j y)` for ascending `s_j` in `[0, 1]`.
pub fn humbert_phi2_ray(args: &Phi2Args, s: &[f64], ctl: &EvalControl) -> Result<Vec<C>> {
    ctl.check()?;
    args.check()?;
    if s.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::InvalidParameter("ray fractions must lie in [0, 1]".into()));
    }
    args.system().along(s, ctl)
}

// Σ_m (α)_m/(ν)_m 2F1(−m, α'; 1−α−m; y/x) x^m/m!
fn gauss_expansion(args: &Phi2Args, ctl: &EvalControl) -> Result<C> {
    let (a, ap, nu, x, y) = (args.alpha, args.alpha_p, args.nu, args.x, args.y);
    if x == C::new(0.0, 0.0) || is_nonpositive_int(a) {
        return Err(Error::RouteUnavailable("2F1 expansion"));
    }
    let w = y / x;
    let mut acc = CSum::default();
    let mut pref = C::new(1.0, 0.0);
    let mut quiet = 0;
    for m in 0..ctl.max_terms.min(2000) {
        let mf = m as f64;
        let g = gauss_2f1_terminating(m as u32, ap, 1.0 - a - mf, w)?;
        let t = pref * g;
        acc.add(t);
        if t.norm() <= 0.125 * f64::EPSILON * acc.value().norm() && mf > x.norm().max(y.norm()) {
            quiet += 1;
            if quiet >= 3 {
                if acc.cancellation() > 0.1 * ctl.rel_tol.max(1e-10) {
                    return Err(Error::RouteUnavailable("2F1 expansion (cancellation)"));
                }
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
        pref = pref * (a + mf) / ((nu + mf) * (mf + 1.0)) * x;
    }
    Err(Error::NonConvergence { what: "2F1 expansion of Φ2", terms: ctl.max_terms })
}

// Γ(ν)/(Γ(α)Γ(ν−α)) ∫_0^1 e^{xξ} ξ^{α−1} (1−ξ)^{ν−α−1} 1F1(α'; ν−α; y(1−ξ)) dξ
fn integral(args: &Phi2Args, ctl: &EvalControl) -> Result<C> {
    let (a, ap, nu, x, y) = (args.alpha, args.alpha_p, args.nu, args.x, args.y);
    let b = nu - a;
    if !(a.re > 0.0) || !(b.re > 0.0) {
        return Err(Error::RouteUnavailable("Euler integral"));
    }
    let pref = (log_gamma(nu)? - log_gamma(a)? - log_gamma(b)?).exp();
    let inner = EvalControl { rel_tol: (ctl.rel_tol * 1e-2).max(1e-15), ..*ctl };
    let v = tanh_sinh(
        |xi, om| {
            let k = kummer_1f1(ap, b, y * om, &inner)?;
            Ok((x * xi + (a - 1.0) * xi.ln() + (b - 1.0) * om.ln()).exp() * k)
        },
        ctl.rel_tol.max(1e-14),
    )?;
    Ok(pref * v)
}
