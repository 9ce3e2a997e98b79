use std::f64::consts::{FRAC_PI_4, PI};

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 8.0 {
        series(ax, 0)
    } else if ax <= 30.0 {
        miller(ax).0
    } else {
        hankel(ax, 0)
    }
}

/// Bessel function of the first kind, order one.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 8.0 {
        series(ax, 1)
    } else if ax <= 30.0 {
        miller(ax).1
    } else {
        hankel(ax, 1)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J1(2√x)/√x`, continued to `x < 0` as `I1(2√|x|)/√|x|`. Equals 1 at 0.
pub fn j1_tilde(x: f64) -> f64 {
    if x <= 4.0 {
        // sum (-x)^n / (n! (n+1)!)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x / (n * (n + 1.0));
            sum += term;
            if term.abs() <= f64::EPSILON * sum.abs() * 0.25 || n > 400.0 {
                break;
            }
        }
        sum
    } else {
        let r = x.sqrt();
        bessel_j1(2.0 * r) / r
    }
}

fn series(x: f64, order: i32) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + order as f64));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() * 0.25 {
            break;
        }
    }
    sum
}

// Backward recurrence normalized by J0 + 2 sum J_2k = 1.
fn miller(x: f64) -> (f64, f64) {
    let mut n = (x + 20.0 + 6.0 * x.sqrt()) as usize;
    n += n % 2;
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut norm = 2.0 * cur;
    for k in (1..=n).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, next / norm)
}

fn hankel(x: f64, order: i32) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            a *= (mu - ((2 * k - 1) as f64).powi(2)) / (k as f64 * 8.0 * x);
        }
        if a.abs() > last {
            break;
        }
        last = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order as f64 + 0.5) * PI + FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
