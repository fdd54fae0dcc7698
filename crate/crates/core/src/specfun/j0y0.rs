//! Order-zero Bessel functions, cephes rational approximations.
//!
//! [0, 5]: rational fits in x². (5, ∞): Hankel phase/amplitude with 6/6 and 7/7
//! rational functions of 25/x².

use super::{p1evl, polevl, sincos_shifted, SQRT_2_OVER_PI};
use std::f64::consts::PI;

const DR1: f64 = 5.783185962946784;
const DR2: f64 = 30.471262343662087;

const RP: [f64; 4] = [
    -4.794432209782018e9,
    1.9561749194655657e12,
    -2.4924834436096772e14,
    9.708622510473064e15,
];
const RQ: [f64; 8] = [
    4.99563147152651e2,
    1.737854016763747e5,
    4.844096583399621e7,
    1.1185553704535683e10,
    2.112775201154892e12,
    3.1051822985742256e14,
    3.1812195594320496e16,
    1.7108629408104315e18,
];

const PP: [f64; 7] = [
    7.969367292973471e-4,
    8.283523921074408e-2,
    1.239533716464143,
    5.447250030587687,
    8.74716500199817,
    5.303240382353949,
    1.0,
];
const PQ: [f64; 7] = [
    9.244088105588637e-4,
    8.562884743544745e-2,
    1.2535274390105895,
    5.470977403304171,
    8.761908832370695,
    5.306052882353947,
    1.0,
];
const QP: [f64; 8] = [
    -1.1366383889846916e-2,
    -1.2825271867050931,
    -1.9553954425773597e1,
    -9.320601521237683e1,
    -1.7768116798048806e2,
    -1.4707750515495118e2,
    -5.141053267665993e1,
    -6.050143506007285,
];
const QQ: [f64; 7] = [
    6.43178256118178e1,
    8.564300259769806e2,
    3.8824018360540163e3,
    7.240467741956525e3,
    5.930727011873169e3,
    2.0620933166032783e3,
    2.420057402402914e2,
];

// y0(x) - (2/pi) ln(x) j0(x), absolute-error fit on [0, 5]
const YP: [f64; 8] = [
    1.5592436785523574e4,
    -1.466392959039716e7,
    5.435264770518765e9,
    -9.821360657179115e11,
    8.75906394395367e13,
    -3.466283033847297e15,
    4.4273326857256984e16,
    -1.8495080043698668e16,
];
const YQ: [f64; 7] = [
    1.0412835366425984e3,
    6.26107330137135e5,
    2.6891963339381415e8,
    8.64002487103935e10,
    2.0297961275010555e13,
    3.1715775284297505e15,
    2.5059625617265306e17,
];

/// Hankel amplitude pair (P, Q) for x > 5.
#[inline]
fn hankel_pq(x: f64) -> (f64, f64) {
    let z = 25.0 / (x * x);
    let p = polevl(z, &PP) / polevl(z, &PQ);
    let q = polevl(z, &QP) / p1evl(z, &QQ);
    (p, q * 5.0 / x)
}

pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 5.0 {
        let z = x * x;
        if x < 1e-5 {
            return 1.0 - z / 4.0;
        }
        return (z - DR1) * (z - DR2) * polevl(z, &RP) / p1evl(z, &RQ);
    }
    let (p, q) = hankel_pq(x);
    let (s, c) = sincos_shifted(x, 1);
    (p * c - q * s) * SQRT_2_OVER_PI / x.sqrt()
}

/// Y0 for x > 0; -inf at 0 and NaN for negative arguments.
pub fn y0(x: f64) -> f64 {
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < 0.0 || x.is_nan() {
        return f64::NAN;
    }
    if x <= 5.0 {
        let z = x * x;
        return polevl(z, &YP) / p1evl(z, &YQ) + 2.0 / PI * x.ln() * j0(x);
    }
    let (p, q) = hankel_pq(x);
    let (s, c) = sincos_shifted(x, 1);
    (p * s + q * c) * SQRT_2_OVER_PI / x.sqrt()
}
