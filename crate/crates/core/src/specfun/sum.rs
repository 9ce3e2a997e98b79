use num_complex::Complex64;

/// Neumaier-compensated complex accumulator that also tracks the largest
/// term, which bounds the cancellation error of the sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
    pub max_term: f64,
}

#[inline]
fn neumaier(s: &mut f64, c: &mut f64, x: f64) {
    let t = *s + x;
    if s.abs() >= x.abs() {
        *c += (*s - t) + x;
    } else {
        *c += (x - t) + *s;
    }
    *s = t;
}

impl CSum {
    #[inline]
    pub fn add(&mut self, x: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, x.re);
        neumaier(&mut self.im, &mut self.im_c, x.im);
        let m = x.norm();
        if m > self.max_term {
            self.max_term = m;
        }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }

    /// Estimated relative error from cancellation among terms.
    pub fn cancellation(&self) -> f64 {
        let v = self.value().norm();
        if v == 0.0 {
            return if self.max_term == 0.0 { 0.0 } else { f64::INFINITY };
        }
        4.0 * f64::EPSILON * self.max_term / v
    }
}
