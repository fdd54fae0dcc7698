//! Star-shaped planar domains described by a radial function r(θ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("radius {radius} is not positive at theta = {theta}")]
    NonPositiveRadius { theta: f64, radius: f64 },
    #[error("x.n = {xdotn} is not positive at theta = {theta}; domain is not strictly star-shaped")]
    NonStarShaped { theta: f64, xdotn: f64 },
    #[error("supplied derivative of order {order} disagrees with finite differences at theta = {theta}")]
    InconsistentDerivatives { order: u8, theta: f64 },
    #[error("quadrature needs at least 16 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("invalid domain specification: {0}")]
    BadSpec(String),
}

/// r, r', r'' at a real angle.
pub type RadialSample = (f64, f64, f64);

/// Radial profile of a domain.
#[derive(Clone)]
pub enum RadialFunction {
    /// r = a0 + Σ_k cos_k cos(kθ) + sin_k sin(kθ), k = 1, 2, ...
    Fourier { a0: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// r = base + amp·cos(lobes·(θ + warp·g(θ))) with g = sin, or cos when `warp_cos`.
    Warped {
        base: f64,
        amp: f64,
        lobes: f64,
        warp: f64,
        warp_cos: bool,
    },
    /// Arbitrary callable; cannot be continued into the complex plane.
    Callable(Arc<dyn Fn(f64) -> RadialSample + Send + Sync>),
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fourier { a0, cos, sin } => f
                .debug_struct("Fourier")
                .field("a0", a0)
                .field("cos", cos)
                .field("sin", sin)
                .finish(),
            Self::Warped { base, amp, lobes, warp, warp_cos } => f
                .debug_struct("Warped")
                .field("base", base)
                .field("amp", amp)
                .field("lobes", lobes)
                .field("warp", warp)
                .field("warp_cos", warp_cos)
                .finish(),
            Self::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl RadialFunction {
    pub fn eval(&self, theta: f64) -> RadialSample {
        match self {
            Self::Fourier { a0, cos, sin } => {
                let (mut r, mut d1, mut d2) = (*a0, 0.0, 0.0);
                for (i, &c) in cos.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let (s, co) = (k * theta).sin_cos();
                    r += c * co;
                    d1 -= c * k * s;
                    d2 -= c * k * k * co;
                }
                for (i, &b) in sin.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let (s, co) = (k * theta).sin_cos();
                    r += b * s;
                    d1 += b * k * co;
                    d2 -= b * k * k * s;
                }
                (r, d1, d2)
            }
            Self::Warped { base, amp, lobes, warp, warp_cos } => {
                let (s, c) = theta.sin_cos();
                let (g, g1, g2) = if *warp_cos { (c, -s, -c) } else { (s, c, -s) };
                let phi = lobes * (theta + warp * g);
                let p1 = lobes * (1.0 + warp * g1);
                let p2 = lobes * warp * g2;
                let (sp, cp) = phi.sin_cos();
                (base + amp * cp, -amp * sp * p1, -amp * (cp * p1 * p1 + sp * p2))
            }
            Self::Callable(f) => f(theta),
        }
    }

    /// r at a complex angle, when the profile has a closed-form continuation.
    pub fn eval_complex(&self, theta: Complex64) -> Option<Complex64> {
        match self {
            Self::Fourier { a0, cos, sin } => {
                let mut r = Complex64::new(*a0, 0.0);
                for (i, &c) in cos.iter().enumerate() {
                    r += c * (theta * (i + 1) as f64).cos();
                }
                for (i, &b) in sin.iter().enumerate() {
                    r += b * (theta * (i + 1) as f64).sin();
                }
                Some(r)
            }
            Self::Warped { base, amp, lobes, warp, warp_cos } => {
                let g = if *warp_cos { theta.cos() } else { theta.sin() };
                Some(*base + *amp * ((theta + *warp * g) * *lobes).cos())
            }
            Self::Callable(_) => None,
        }
    }
}

/// Named or coefficient-specified domain, as accepted in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainSpec {
    /// Unit disk.
    Disk,
    /// r = 1 + 0.3 cos[3(θ + 0.2 sin θ)].
    Smooth3,
    /// r = 1 + 0.3 cos[3(θ + 0.2 cos θ)].
    Smooth3Cos,
    Fourier { a0: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl DomainSpec {
    pub fn radial_function(&self) -> RadialFunction {
        match self {
            Self::Disk => RadialFunction::Fourier { a0: 1.0, cos: vec![], sin: vec![] },
            Self::Smooth3 | Self::Smooth3Cos => RadialFunction::Warped {
                base: 1.0,
                amp: 0.3,
                lobes: 3.0,
                warp: 0.2,
                warp_cos: matches!(self, Self::Smooth3Cos),
            },
            Self::Fourier { a0, cos, sin } => RadialFunction::Fourier {
                a0: *a0,
                cos: cos.clone(),
                sin: sin.clone(),
            },
        }
    }

    pub fn build(&self) -> Result<RadialDomain, GeometryError> {
        build_domain(self.radial_function())
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disk => f.write_str("disk"),
            Self::Smooth3 => f.write_str("smooth3"),
            Self::Smooth3Cos => f.write_str("smooth3-cos"),
            Self::Fourier { a0, cos, sin } => {
                write!(f, "fourier:{a0}")?;
                for k in 0..cos.len().max(sin.len()) {
                    let c = cos.get(k).copied().unwrap_or(0.0);
                    let s = sin.get(k).copied().unwrap_or(0.0);
                    write!(f, ",{c},{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `disk`, `smooth3`, `smooth3-cos` or `fourier:a0,c1,s1,c2,s2,...`.
impl FromStr for DomainSpec {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "disk" => Ok(Self::Disk),
            "smooth3" => Ok(Self::Smooth3),
            "smooth3-cos" => Ok(Self::Smooth3Cos),
            other => {
                let body = other
                    .strip_prefix("fourier:")
                    .ok_or_else(|| GeometryError::BadSpec(format!("unknown domain '{other}'")))?;
                let vals = body
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| GeometryError::BadSpec(format!("fourier coefficients: {e}")))?;
                let (a0, rest) = vals
                    .split_first()
                    .ok_or_else(|| GeometryError::BadSpec("empty fourier list".into()))?;
                if rest.len() % 2 != 0 {
                    return Err(GeometryError::BadSpec(
                        "fourier list must be a0 followed by (cos, sin) pairs".into(),
                    ));
                }
                Ok(Self::Fourier {
                    a0: *a0,
                    cos: rest.iter().step_by(2).copied().collect(),
                    sin: rest.iter().skip(1).step_by(2).copied().collect(),
                })
            }
        }
    }
}

/// Validated star-shaped domain, origin at the parametrization centre.
#[derive(Debug, Clone)]
pub struct RadialDomain {
    radial: RadialFunction,
    scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: [f64; 2],
    /// Unit tangent in the direction of increasing θ.
    pub tangent: [f64; 2],
    /// Unit outward normal.
    pub normal: [f64; 2],
    pub xdotn: f64,
    /// |x'(θ)|
    pub speed: f64,
}

const CHECK_SAMPLES: usize = 4096;

pub fn build_domain(radial: RadialFunction) -> Result<RadialDomain, GeometryError> {
    let d = RadialDomain { radial, scale: 1.0 };
    d.validate()?;
    Ok(d)
}

impl RadialDomain {
    fn validate(&self) -> Result<(), GeometryError> {
        let h = 1e-4;
        for i in 0..CHECK_SAMPLES {
            let theta = 2.0 * PI * i as f64 / CHECK_SAMPLES as f64;
            let (r, r1, r2) = self.radius(theta);
            if !(r > 0.0) {
                return Err(GeometryError::NonPositiveRadius { theta, radius: r });
            }
            let bp = self.boundary_point(theta);
            if !(bp.xdotn > 0.0) {
                return Err(GeometryError::NonStarShaped { theta, xdotn: bp.xdotn });
            }
            if i % 16 == 0 {
                let (rp, r1p, _) = self.radius(theta + h);
                let (rm, r1m, _) = self.radius(theta - h);
                let scale = r.abs() + r1.abs() + r2.abs();
                if ((rp - rm) / (2.0 * h) - r1).abs() > 1e-6 * scale {
                    return Err(GeometryError::InconsistentDerivatives { order: 1, theta });
                }
                if ((r1p - r1m) / (2.0 * h) - r2).abs() > 1e-6 * scale {
                    return Err(GeometryError::InconsistentDerivatives { order: 2, theta });
                }
            }
        }
        Ok(())
    }

    /// Copy of the domain dilated by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> RadialDomain {
        assert!(factor > 0.0, "dilation factor must be positive");
        RadialDomain { radial: self.radial.clone(), scale: self.scale * factor }
    }

    pub fn radial_function(&self) -> &RadialFunction {
        &self.radial
    }

    /// r, r', r'' at θ.
    pub fn radius(&self, theta: f64) -> RadialSample {
        let (r, r1, r2) = self.radial.eval(theta);
        (self.scale * r, self.scale * r1, self.scale * r2)
    }

    /// The boundary parametrization x(θ) = r(θ)e^{iθ} continued to complex θ.
    pub fn continued_point(&self, theta: Complex64) -> Option<Complex64> {
        self.radial
            .eval_complex(theta)
            .map(|r| r * self.scale * (Complex64::i() * theta).exp())
    }

    pub fn boundary_point(&self, theta: f64) -> BoundaryPoint {
        let (r, r1, _) = self.radius(theta);
        let (s, c) = theta.sin_cos();
        let dx = [r1 * c - r * s, r1 * s + r * c];
        let speed = r.hypot(r1);
        let tangent = [dx[0] / speed, dx[1] / speed];
        BoundaryPoint {
            point: [r * c, r * s],
            tangent,
            normal: [tangent[1], -tangent[0]],
            xdotn: r * r / speed,
            speed,
        }
    }

    /// Strict interior test through the radial function.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let rho = p[0].hypot(p[1]);
        rho < self.radius(p[1].atan2(p[0])).0
    }
}

/// Periodic trapezoid rule on equispaced parameters θ_m = 2πm/M.
#[derive(Debug, Clone)]
pub struct BoundaryQuadrature {
    pub m: usize,
    pub thetas: Vec<f64>,
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
    pub xdotn: Vec<f64>,
}

pub fn build_quadrature(d: &RadialDomain, m: usize) -> Result<BoundaryQuadrature, GeometryError> {
    if m < 16 {
        return Err(GeometryError::TooFewNodes(m));
    }
    let mut q = BoundaryQuadrature {
        m,
        thetas: Vec::with_capacity(m),
        nodes: Vec::with_capacity(m),
        weights: Vec::with_capacity(m),
        normals: Vec::with_capacity(m),
        xdotn: Vec::with_capacity(m),
    };
    let dtheta = 2.0 * PI / m as f64;
    for i in 0..m {
        let theta = dtheta * i as f64;
        let bp = d.boundary_point(theta);
        q.thetas.push(theta);
        q.nodes.push(bp.point);
        q.weights.push(dtheta * bp.speed);
        q.normals.push(bp.normal);
        q.xdotn.push(bp.xdotn);
    }
    Ok(q)
}

impl BoundaryQuadrature {
    /// ∮ f ds for samples of f at the nodes.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomConstants {
    pub sup_xdotn: f64,
    pub inf_xdotn: f64,
    /// Half the largest distance from the origin to a point of the closed domain.
    pub s: f64,
    pub perimeter: f64,
    pub area: f64,
    /// Smallest boundary radius: the disk of this radius about the origin is inscribed.
    pub r_min: f64,
}

/// Extrema by dense sampling refined with golden-section search, plus
/// perimeter and area (½∮x·n ds) by the trapezoid rule on `dense_m` nodes.
pub fn geom_constants(d: &RadialDomain, dense_m: usize) -> GeomConstants {
    let dense_m = dense_m.max(4096);
    let h = 2.0 * PI / dense_m as f64;
    let xn = |t: f64| d.boundary_point(t).xdotn;
    let r = |t: f64| d.radius(t).0;
    let (mut perimeter, mut area) = (0.0, 0.0);
    for i in 0..dense_m {
        let bp = d.boundary_point(h * i as f64);
        perimeter += h * bp.speed;
        area += 0.5 * h * bp.speed * bp.xdotn;
    }
    GeomConstants {
        sup_xdotn: -refined_min(|t| -xn(t), dense_m),
        inf_xdotn: refined_min(xn, dense_m),
        s: -refined_min(|t| -r(t), dense_m) / 2.0,
        perimeter,
        area,
        r_min: refined_min(r, dense_m),
    }
}

fn refined_min<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    let (best_i, best) = (0..n)
        .map(|i| (i, f(h * i as f64)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let (mut a, mut b) = (h * (best_i as f64 - 1.0), h * (best_i as f64 + 1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    for _ in 0..80 {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = f(e);
        }
    }
    best.min(fc).min(fe)
}
