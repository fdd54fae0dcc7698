//! Helmholtz trial functions: fundamental-solution (MFS) bases and closed-form
//! unit-disk eigenmodes.

use crate::geometry::RadialDomain;
use crate::specfun::{bessel_j, bessel_zeros, bessel_zeros_below, jn, y0, y1};
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("charge point {index} at ({x}, {y}) is not strictly outside the domain")]
    ChargePointInside { index: usize, x: f64, y: f64 },
    #[error("radial function has no closed-form analytic continuation")]
    ContinuationFailure,
    #[error("charge curve intersects itself between segments {first} and {second}")]
    SelfIntersectingCharges { first: usize, second: usize },
    #[error("evaluation point {point} coincides with charge point {charge}")]
    CoincidentPoint { point: usize, charge: usize },
    #[error("invalid basis parameter: {0}")]
    InvalidParameter(String),
}

/// Values and Cartesian gradients of every basis function at a set of points,
/// each stored as (points × functions).
#[derive(Debug, Clone)]
pub struct BasisValues {
    pub values: Array2<f64>,
    pub dx: Array2<f64>,
    pub dy: Array2<f64>,
}

/// A finite family of solutions of (Δ + E)u = 0 near the domain.
pub trait TrialBasis: Sync {
    fn energy(&self) -> f64;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn eval(&self, points: &[[f64; 2]]) -> Result<BasisValues, BasisError>;
}

/// ξ_n(x) = Y0(√E |x - y_n|) with charges on the continued boundary curve.
#[derive(Debug, Clone)]
pub struct MfsBasis {
    pub energy: f64,
    pub delta: f64,
    pub charges: Vec<[f64; 2]>,
}

/// Charge points y_n = x(2πn/N - iδ), rejected unless strictly exterior and
/// forming a simple closed polygon.
pub fn build_mfs(d: &RadialDomain, energy: f64, n: usize, delta: f64) -> Result<MfsBasis, BasisError> {
    if !(energy > 0.0) {
        return Err(BasisError::InvalidParameter(format!("energy must be positive, got {energy}")));
    }
    if n == 0 {
        return Err(BasisError::InvalidParameter("basis size must be at least 1".into()));
    }
    if !(delta >= 0.0) {
        return Err(BasisError::InvalidParameter(format!("delta must be nonnegative, got {delta}")));
    }
    let mut charges = Vec::with_capacity(n);
    for i in 0..n {
        let theta = Complex64::new(2.0 * PI * i as f64 / n as f64, -delta);
        let z = d.continued_point(theta).ok_or(BasisError::ContinuationFailure)?;
        let rho = z.norm();
        let r = d.radius(z.im.atan2(z.re)).0;
        if !(rho - r > 1e-10 * r) {
            return Err(BasisError::ChargePointInside { index: i, x: z.re, y: z.im });
        }
        charges.push([z.re, z.im]);
    }
    if let Some((first, second)) = polygon_self_intersection(&charges) {
        return Err(BasisError::SelfIntersectingCharges { first, second });
    }
    Ok(MfsBasis { energy, delta, charges })
}

fn polygon_self_intersection(p: &[[f64; 2]]) -> Option<(usize, usize)> {
    let n = p.len();
    if n < 4 {
        return None;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, e) = (p[j], p[(j + 1) % n]);
            let d1 = cross(a, b, c);
            let d2 = cross(a, b, e);
            let d3 = cross(c, e, a);
            let d4 = cross(c, e, b);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return Some((i, j));
            }
        }
    }
    None
}

impl TrialBasis for MfsBasis {
    fn energy(&self) -> f64 {
        self.energy
    }

    fn len(&self) -> usize {
        self.charges.len()
    }

    fn eval(&self, points: &[[f64; 2]]) -> Result<BasisValues, BasisError> {
        let k = self.energy.sqrt();
        let n = self.charges.len();
        let mut values = Array2::zeros((points.len(), n));
        let mut dx = Array2::zeros((points.len(), n));
        let mut dy = Array2::zeros((points.len(), n));
        let rows = values
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .zip(dx.axis_iter_mut(Axis(0)).into_par_iter())
            .zip(dy.axis_iter_mut(Axis(0)).into_par_iter())
            .enumerate();
        rows.try_for_each(|(pi, ((mut v, mut gx), mut gy))| {
            let x = points[pi];
            for (ci, y) in self.charges.iter().enumerate() {
                let (ex, ey) = (x[0] - y[0], x[1] - y[1]);
                let dist = ex.hypot(ey);
                if dist <= f64::EPSILON * y[0].hypot(y[1]).max(1.0) {
                    return Err(BasisError::CoincidentPoint { point: pi, charge: ci });
                }
                let kr = k * dist;
                v[ci] = y0(kr);
                let g = -k * y1(kr) / dist;
                gx[ci] = g * ex;
                gy[ci] = g * ey;
            }
            Ok(())
        })?;
        Ok(BasisValues { values, dx, dy })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Cos,
    Sin,
}

/// L²-normalized Dirichlet eigenmode c·J_m(j r)·{cos, sin}(mθ) of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskMode {
    pub m: u32,
    pub k: u32,
    pub parity: Parity,
    /// j_{m,k}
    pub zero: f64,
    pub energy: f64,
    pub norm_const: f64,
}

pub fn disk_mode(m: u32, k: u32, parity: Parity) -> Result<DiskMode, BasisError> {
    if k == 0 {
        return Err(BasisError::InvalidParameter("radial index starts at 1".into()));
    }
    if m == 0 && parity == Parity::Sin {
        return Err(BasisError::InvalidParameter("m = 0 has no sine mode".into()));
    }
    let zero = bessel_zeros(m, k as usize).zeros[k as usize - 1];
    Ok(mode_from_zero(m, k, parity, zero))
}

fn mode_from_zero(m: u32, k: u32, parity: Parity, zero: f64) -> DiskMode {
    let angular = if m == 0 { 2.0 * PI } else { PI };
    let jp = jn(m + 1, zero);
    DiskMode {
        m,
        k,
        parity,
        zero,
        energy: zero * zero,
        norm_const: (2.0 / (angular * jp * jp)).sqrt(),
    }
}

impl DiskMode {
    fn angular(&self, theta: f64) -> (f64, f64) {
        let (s, c) = (self.m as f64 * theta).sin_cos();
        match self.parity {
            Parity::Cos => (c, -s),
            Parity::Sin => (s, c),
        }
    }

    /// φ, ∂φ/∂x, ∂φ/∂y at a point.
    pub fn eval_point(&self, p: [f64; 2]) -> (f64, f64, f64) {
        let r = p[0].hypot(p[1]);
        let theta = p[1].atan2(p[0]);
        let (t, dt) = self.angular(theta);
        let (jm, djm) = bessel_j(self.m, self.zero * r);
        let c = self.norm_const;
        let dr = c * self.zero * djm * t;
        // (1/r) ∂φ/∂θ, with the r → 0 limit of J_m(jr)/r
        let jm_over_r = if r > 1e-8 {
            jm / r
        } else if self.m == 1 {
            0.5 * self.zero
        } else {
            0.0
        };
        let dtheta = c * jm_over_r * self.m as f64 * dt;
        let (s, co) = theta.sin_cos();
        (c * jm * t, dr * co - dtheta * s, dr * s + dtheta * co)
    }

    /// ψ(θ) = ∂φ/∂n on the unit circle.
    pub fn boundary_trace(&self, theta: f64) -> f64 {
        let (_, djm) = bessel_j(self.m, self.zero);
        self.norm_const * self.zero * djm * self.angular(theta).0
    }
}

/// Every unit-disk eigenmode with energy ≤ `e_max`, ascending, with the cos/sin
/// pair listed for each m ≥ 1.
pub fn disk_spectrum(e_max: f64) -> Vec<DiskMode> {
    let x_max = e_max.max(0.0).sqrt();
    let mut modes = Vec::new();
    let mut m = 0u32;
    loop {
        let zeros = bessel_zeros_below(m, x_max);
        if zeros.is_empty() {
            break;
        }
        for (i, &z) in zeros.iter().enumerate() {
            modes.push(mode_from_zero(m, i as u32 + 1, Parity::Cos, z));
            if m > 0 {
                modes.push(mode_from_zero(m, i as u32 + 1, Parity::Sin, z));
            }
        }
        m += 1;
    }
    modes.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.m.cmp(&b.m))
            .then((a.parity == Parity::Sin).cmp(&(b.parity == Parity::Sin)))
    });
    modes
}

/// Analytic disk modes used directly as trial functions.
#[derive(Debug, Clone)]
pub struct DiskModeBasis {
    pub energy: f64,
    pub modes: Vec<DiskMode>,
}

impl TrialBasis for DiskModeBasis {
    fn energy(&self) -> f64 {
        self.energy
    }

    fn len(&self) -> usize {
        self.modes.len()
    }

    fn eval(&self, points: &[[f64; 2]]) -> Result<BasisValues, BasisError> {
        let shape = (points.len(), self.modes.len());
        let mut out = BasisValues {
            values: Array2::zeros(shape),
            dx: Array2::zeros(shape),
            dy: Array2::zeros(shape),
        };
        for (i, p) in points.iter().enumerate() {
            for (j, mode) in self.modes.iter().enumerate() {
                let (v, gx, gy) = mode.eval_point(*p);
                out.values[(i, j)] = v;
                out.dx[(i, j)] = gx;
                out.dy[(i, j)] = gy;
            }
        }
        Ok(out)
    }
}
