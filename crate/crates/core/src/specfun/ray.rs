//! Taylor continuation of confluent hypergeometric series along a ray.
//!
//! For `u(s) = F(s·x_1, .., s·x_k)` with
//! `F = Σ (ν)_{|m|}^{-1} Π_i (α_i)_{m_i} x_i^{m_i} / m_i!`
//! (`k = 1` gives `1F1`, `k = 2` gives `Φ2`) the functions
//! `A_i = x_i ∂_i F` obey
//!
//! ```text
//! s u'   = Σ A_i
//! s A_i' = (x_i s − (ν − 1)) A_i + α_i x_i s u
//! ```
//!
//! which is regular except at `s = 0`. The state is started from the
//! series at a small anchor and advanced with local Taylor expansions
//! whose coefficients follow from the system by recurrence.

use num_complex::Complex64;

use super::sum::CSum;
use super::EvalControl;
use crate::error::{Error, Result};

type C = Complex64;

const MAX_ORDER: usize = 90;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Confluent {
    pub nu: C,
    pub alpha: [C; 2],
    pub x: [C; 2],
    pub k: usize,
}

/// Series value with the channel derivatives `A_i` and the cancellation
/// estimate of the value.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesValue {
    pub state: [C; 3],
    pub cancellation: f64,
}

impl Confluent {
    pub fn kummer(a: C, b: C, z: C) -> Self {
        Self { nu: b, alpha: [a, C::new(0.0, 0.0)], x: [z, C::new(0.0, 0.0)], k: 1 }
    }

    pub fn humbert(alpha: C, alpha_p: C, nu: C, x: C, y: C) -> Self {
        Self { nu, alpha: [alpha, alpha_p], x: [x, y], k: 2 }
    }

    /// Maclaurin series at `s·x`.
    pub fn series(&self, s: f64, ctl: &EvalControl) -> Result<SeriesValue> {
        let x = self.x[0] * s;
        let y = self.x[1] * s;
        let (a, ap, nu) = (self.alpha[0], self.alpha[1], self.nu);
        let mut val = CSum::default();
        let mut da = CSum::default();
        let mut db = CSum::default();
        let tiny = f64::EPSILON * 0.125;
        let mut row_head = C::new(1.0, 0.0);
        let mut quiet_rows = 0;
        let mut m = 0usize;
        let mut terms = 0usize;
        loop {
            // row m: sum over n of (α)_m (α')_n / ((ν)_{m+n} m! n!) x^m y^n
            let mut t = row_head;
            let mut n = 0usize;
            let mut row_max: f64 = 0.0;
            let mut quiet = 0;
            loop {
                val.add(t);
                da.add(t * m as f64);
                db.add(t * n as f64);
                row_max = row_max.max(t.norm() * (1.0 + (m + n) as f64));
                terms += 1;
                if self.k == 1 || y == C::new(0.0, 0.0) {
                    break;
                }
                let nf = n as f64;
                t = t * (ap + nf) / ((nu + (m + n) as f64) * (nf + 1.0)) * y;
                n += 1;
                let scale = val.value().norm() + da.value().norm() + db.value().norm();
                if t.norm() * (1.0 + (m + n) as f64) <= tiny * scale && n as f64 > y.norm() {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if terms > ctl.max_terms * 64 {
                    return Err(Error::NonConvergence { what: "hypergeometric series", terms });
                }
                if t == C::new(0.0, 0.0) {
                    break;
                }
            }
            let mf = m as f64;
            row_head = row_head * (a + mf) / ((nu + mf) * (mf + 1.0)) * x;
            m += 1;
            let scale = val.value().norm() + da.value().norm() + db.value().norm();
            if row_max <= tiny * scale && mf > x.norm() {
                quiet_rows += 1;
                if quiet_rows >= 3 {
                    break;
                }
            } else {
                quiet_rows = 0;
            }
            if row_head == C::new(0.0, 0.0) && (self.k == 1 || y == C::new(0.0, 0.0)) {
                break;
            }
            if m > ctl.max_terms {
                return Err(Error::NonConvergence { what: "hypergeometric series", terms: m });
            }
        }
        Ok(SeriesValue {
            state: [val.value(), da.value(), db.value()],
            cancellation: val.cancellation(),
        })
    }

    fn anchor(&self) -> f64 {
        let nu = self.nu.norm().max(1.0);
        let mut r: f64 = 0.0;
        for i in 0..self.k {
            let xi = self.x[i].norm();
            r = r.max(xi).max(xi * self.alpha[i].norm() / nu);
        }
        if r == 0.0 {
            1.0
        } else {
            (0.5 / r).min(1.0)
        }
    }

    fn rate(&self, s: f64) -> f64 {
        let mut w: f64 = 1.0;
        for i in 0..self.k {
            let xi = self.x[i].norm();
            w = w.max(xi + (xi * self.alpha[i].norm() / s).sqrt());
        }
        w
    }

    /// One Taylor step from `s` to `s + h`; `None` if the expansion did not
    /// settle within the order budget.
    fn step(&self, s: f64, h: f64, u: &[C; 3]) -> Option<[C; 3]> {
        let k = self.k;
        let scale = u.iter().map(|v| v.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
        let (mut p_prev, mut p) = (C::new(0.0, 0.0), u[0]);
        let mut q_prev = [C::new(0.0, 0.0); 2];
        let mut q = [u[1], u[2]];
        let mut acc = [CSum::default(), CSum::default(), CSum::default()];
        acc[0].add(p);
        acc[1].add(q[0]);
        acc[2].add(q[1]);
        let h2 = h * h;
        let mut quiet = 0;
        for order in 0..MAX_ORDER {
            let kf = order as f64;
            let denom = s * (kf + 1.0);
            let qsum = if k == 1 { q[0] } else { q[0] + q[1] };
            let p_next = (qsum - p * kf) * (h / denom);
            let mut q_next = [C::new(0.0, 0.0); 2];
            for i in 0..k {
                let xi = self.x[i];
                let r = xi * (q[i] * (s * h) + q_prev[i] * h2) - q[i] * ((self.nu - 1.0 + kf) * h)
                    + self.alpha[i] * xi * (p * (s * h) + p_prev * h2);
                q_next[i] = r / denom;
            }
            p_prev = p;
            p = p_next;
            q_prev = q;
            q = q_next;
            acc[0].add(p);
            acc[1].add(q[0]);
            acc[2].add(q[1]);
            let size = p.norm() + q[0].norm() + q[1].norm();
            let total = acc.iter().map(|a| a.value().norm()).sum::<f64>().max(scale * 1e-300);
            if size <= 0.25 * f64::EPSILON * total {
                quiet += 1;
                if quiet >= 3 {
                    return Some([acc[0].value(), acc[1].value(), acc[2].value()]);
                }
            } else {
                quiet = 0;
            }
            if !size.is_finite() {
                return None;
            }
        }
        None
    }

    /// Values of the function at `s_j · x` for ascending `s_j` in `[0, 1]`.
    pub fn along(&self, targets: &[f64], ctl: &EvalControl) -> Result<Vec<C>> {
        let s0 = self.anchor();
        let mut out = Vec::with_capacity(targets.len());
        let mut i = 0;
        while i < targets.len() && targets[i] <= s0 {
            let s = targets[i];
            out.push(if s == 0.0 { C::new(1.0, 0.0) } else { self.series(s, ctl)?.state[0] });
            i += 1;
        }
        if i == targets.len() {
            return Ok(out);
        }
        let mut s = s0;
        let mut u = self.series(s0, ctl)?.state;
        let mut h = 0.4 * s;
        let mut steps = 0usize;
        while i < targets.len() {
            let goal = targets[i];
            if goal < s {
                return Err(Error::InvalidParameter("ray targets must be ascending".into()));
            }
            let hmax = (0.4 * s).min(3.0 / self.rate(s));
            h = h.min(hmax).min(goal - s);
            if h <= 0.0 {
                out.push(u[0]);
                i += 1;
                h = hmax;
                continue;
            }
            match self.step(s, h, &u) {
                Some(v) => {
                    u = v;
                    s = if goal - s - h <= 1e-15 * goal { goal } else { s + h };
                    h *= 1.5;
                }
                None => {
                    h *= 0.5;
                    if h < 1e-14 * s {
                        return Err(Error::NonConvergence { what: "ray continuation", terms: steps });
                    }
                }
            }
            steps += 1;
            if steps > 64 * ctl.max_terms {
                return Err(Error::NonConvergence { what: "ray continuation", terms: steps });
            }
            if s == goal {
                out.push(u[0]);
                i += 1;
                while i < targets.len() && targets[i] == goal {
                    out.push(u[0]);
                    i += 1;
                }
            }
        }
        Ok(out)
    }
}
