//! Integer-order J_n, fdlibm strategy.
//!
//! Forward recurrence from J0, J1 when n-1 < x; leading Taylor term for tiny x;
//! otherwise Miller backward recurrence seeded by the continued fraction for
//! J_n/J_{n-1} and normalized against J0 or J1.

use super::j0y0::j0;
use super::j1y1::j1;

const TINY: f64 = 1.862645149230957e-9; // 2^-29
const LOG_MAX: f64 = 7.09782712893383973096e+02;

pub fn jn(n: u32, x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let odd_flip = x < 0.0 && n % 2 == 1;
    let x = x.abs();
    let v = jn_nonneg(n, x);
    if odd_flip {
        -v
    } else {
        v
    }
}

fn jn_nonneg(n: u32, x: f64) -> f64 {
    match n {
        0 => return j0(x),
        1 => return j1(x),
        _ => {}
    }
    if x == 0.0 || x.is_infinite() {
        return 0.0;
    }
    let nm1 = n - 1;
    if (nm1 as f64) < x {
        let (mut a, mut b) = (j0(x), j1(x));
        for i in 1..=nm1 {
            let t = b;
            b = b * (2.0 * i as f64 / x) - a;
            a = t;
        }
        return b;
    }
    if x < TINY {
        if nm1 > 32 {
            return 0.0;
        }
        let half = 0.5 * x;
        let mut b = half;
        let mut a = 1.0;
        for i in 2..=n {
            a *= i as f64;
            b *= half;
        }
        return b / a;
    }

    let nf = n as f64;
    let w = 2.0 * nf / x;
    let h = 2.0 / x;
    let mut z = w + h;
    let mut q0 = w;
    let mut q1 = w * z - 1.0;
    let mut k = 1u32;
    while q1 < 1.0e9 {
        k += 1;
        z += h;
        let tmp = z * q1 - q0;
        q0 = q1;
        q1 = tmp;
    }
    // t = J_n / J_{n-1} by continued fraction
    let mut t = 0.0;
    for i in (0..=k).rev() {
        t = 1.0 / (2.0 * (i as f64 + nf) / x - t);
    }
    let mut a = t;
    let mut b = 1.0;
    let rescale = nf * w.abs().ln() >= LOG_MAX;
    for i in (1..=nm1).rev() {
        let tmp = b;
        b = b * (2.0 * i as f64) / x - a;
        a = tmp;
        if rescale && b > 1e150 {
            a /= b;
            t /= b;
            b = 1.0;
        }
    }
    let (z0, z1) = (j0(x), j1(x));
    if z0.abs() >= z1.abs() {
        t * z0 / b
    } else {
        t * z1 / a
    }
}
