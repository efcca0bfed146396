//! Special functions not provided by std.

use std::f64::consts::PI;

/// Real dilogarithm Li₂(x) for x ≤ 1.
pub fn dilog(x: f64) -> f64 {
    if x.is_nan() || x > 1.0 {
        return f64::NAN;
    }
    if x == 1.0 {
        return PI * PI / 6.0;
    }
    if x < -1.0 {
        // Li₂(x) = −π²/6 − ½ln²(−x) − Li₂(1/x)
        let l = (-x).ln();
        return -PI * PI / 6.0 - 0.5 * l * l - dilog(1.0 / x);
    }
    if x < -0.5 {
        // Landen: Li₂(x) = −Li₂(x/(x−1)) − ½ln²(1−x)
        let l = (-x).ln_1p();
        return -series(x / (x - 1.0)) - 0.5 * l * l;
    }
    if x <= 0.5 {
        return series(x);
    }
    // reflection
    PI * PI / 6.0 - x.ln() * (-x).ln_1p() - series(1.0 - x)
}

fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = x;
    for k in 1..200 {
        let t = p / (k * k) as f64;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
        p *= x;
    }
    sum
}
