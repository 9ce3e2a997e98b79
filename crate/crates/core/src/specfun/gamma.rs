use num_complex::Complex64;

use super::is_nonpositive_int;
use crate::error::{Error, Result};

// B_{2k} / (2k (2k - 1)) for k = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

/// Log-gamma on its principal branch (cut along the negative real axis),
/// continuous in each open half-plane; `exp` of it is `Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_int(z) {
        return Err(Error::Pole("log_gamma"));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 10.0 || w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    let half_ln_2pi = 0.918_938_533_204_672_8;
    Ok((w - 0.5) * w.ln() - w + half_ln_2pi + series - shift)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// `1/Γ(z)`, zero at the poles of `Γ`.
pub fn rgamma(z: Complex64) -> Complex64 {
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}
