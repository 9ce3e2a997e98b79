use num_complex::Complex64;

use super::sum::CSum;
use crate::error::{Error, Result};

type C = Complex64;

/// Terminating Gauss function `2F1(-n, b; c; z)`, a polynomial of degree
/// `n` in `z`, summed with compensation.
pub fn gauss_2f1_terminating(n: u32, b: C, c: C, z: C) -> Result<C> {
    let mut term = C::new(1.0, 0.0);
    let mut acc = CSum::default();
    acc.add(term);
    for k in 0..n {
        let kf = k as f64;
        let ck = c + kf;
        if ck == C::new(0.0, 0.0) {
            return Err(Error::Pole("2F1 lower parameter"));
        }
        term = term * (kf - n as f64) * (b + kf) / (ck * (kf + 1.0)) * z;
        acc.add(term);
    }
    Ok(acc.value())
}
