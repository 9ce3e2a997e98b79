use num_complex::Complex64;

use super::ray::Confluent;
use super::{is_nonpositive_int, EvalControl, Route};
use crate::error::{Error, Result};

type C = Complex64;

/// Kummer's confluent hypergeometric function `1F1(a; b; z)`.
pub fn kummer_1f1(a: C, b: C, z: C, ctl: &EvalControl) -> Result<C> {
    kummer_1f1_with(a, b, z, ctl).map(|v| v.0)
}

/// Like [`kummer_1f1`], also reporting the route taken.
pub fn kummer_1f1_with(a: C, b: C, z: C, ctl: &EvalControl) -> Result<(C, Route)> {
    ctl.check()?;
    if is_nonpositive_int(b) {
        return Err(Error::Pole("1F1 lower parameter"));
    }
    if z == C::new(0.0, 0.0) || a == C::new(0.0, 0.0) {
        return Ok((C::new(1.0, 0.0), Route::Series));
    }
    // Kummer's transformation keeps Re z >= 0, where the continuation
    // integrates towards the dominant solution.
    if z.re < 0.0 && !is_nonpositive_int(a) {
        let (v, r) = direct(b - a, b, -z, ctl)?;
        return Ok((z.exp() * v, r));
    }
    direct(a, b, z, ctl)
}

fn direct(a: C, b: C, z: C, ctl: &EvalControl) -> Result<(C, Route)> {
    let sys = Confluent::kummer(a, b, z);
    let terminating = is_nonpositive_int(a);
    let mut series = None;
    if terminating || z.norm() <= 40.0 {
        if let Ok(sv) = sys.series(1.0, ctl) {
            if terminating || sv.cancellation <= 0.01 * ctl.rel_tol {
                series = Some(sv.state[0]);
            }
        }
    }
    if let Some(v) = series {
        if ctl.validate && !terminating {
            let w = sys.along(&[1.0], ctl)?[0];
            cross_check("1F1", v, w, ctl)?;
        }
        return Ok((v, Route::Series));
    }
    let v = sys.along(&[1.0], ctl)?[0];
    Ok((v, Route::Ray))
}

pub(crate) fn cross_check(what: &'static str, a: C, b: C, ctl: &EvalControl) -> Result<()> {
    let diff = (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    if diff > 1e3 * ctl.rel_tol {
        return Err(Error::RouteDisagreement { what, diff });
    }
    Ok(())
}

/// `1F1(a; b; s_j z)` for ascending `s_j` in `[0, 1]`, sharing one
/// continuation along the ray.
pub fn kummer_1f1_ray(a: C, b: C, z: C, s: &[f64], ctl: &EvalControl) -> Result<Vec<C>> {
    ctl.check()?;
    if is_nonpositive_int(b) {
        return Err(Error::Pole("1F1 lower parameter"));
    }
    if s.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::InvalidParameter("ray fractions must lie in [0, 1]".into()));
    }
    if z.re < 0.0 && !is_nonpositive_int(a) {
        let v = Confluent::kummer(b - a, b, -z).along(s, ctl)?;
        return Ok(v.into_iter().zip(s).map(|(v, &sj)| (z * sj).exp() * v).collect());
    }
    Confluent::kummer(a, b, z).along(s, ctl)
}
