//! Bessel functions of integer order and their zeros.

mod j0y0;
mod j1y1;
mod jn;
mod zeros;

pub use j0y0::{j0, y0};
pub use j1y1::{j1, y1};
pub use jn::jn;
pub use zeros::{bessel_zeros, bessel_zeros_below, find_zeros, BesselZeroTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("argument {0} outside the domain of Y0 (requires x > 0)")]
    Domain(f64),
}

pub(crate) const SQRT_2_OVER_PI: f64 = 0.7978845608028654;

/// Highest-degree-first polynomial.
#[inline]
pub(crate) fn polevl(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Highest-degree-first polynomial with an implicit leading coefficient of 1.
#[inline]
pub(crate) fn p1evl(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(1.0, |acc, &c| acc * x + c)
}

/// (sin(x - q·π/4), cos(x - q·π/4)) for q ∈ {1, 3}.
///
/// Built from sin x ± cos x, with the smaller of the two recovered through
/// (sin x + cos x)(sin x - cos x) = -cos 2x.
#[inline]
pub(crate) fn sincos_shifted(x: f64, q: u8) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let mut plus = s + c;
    let mut minus = s - c;
    if x < 1e300 {
        let c2 = (2.0 * x).cos();
        if s * c > 0.0 {
            minus = -c2 / plus;
        } else {
            plus = -c2 / minus;
        }
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match q {
        1 => (minus * r, plus * r),
        _ => (-plus * r, minus * r),
    }
}

/// J_m(x) and J_m'(x).
pub fn bessel_j(m: u32, x: f64) -> (f64, f64) {
    let v = jn(m, x);
    let d = if m == 0 {
        -j1(x)
    } else {
        0.5 * (jn(m - 1, x) - jn(m + 1, x))
    };
    (v, d)
}

/// Y0(x) and Y0'(x) = -Y1(x).
pub fn bessel_y0(x: f64) -> Result<(f64, f64), SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain(x));
    }
    Ok((y0(x), -y1(x)))
}

#[cfg(test)]
mod tests;
