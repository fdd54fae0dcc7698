//! Boundary and interior Gram matrices of a trial basis, and the regularized
//! subspace on which tensions are minimized.

use crate::basis::{BasisError, TrialBasis};
use crate::geometry::{BoundaryQuadrature, RadialDomain};
use ndarray::{concatenate, s, Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{JobSvd, SVDDC};
use std::f64::consts::PI;
use std::io::{self, Read, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscretizationError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no singular value of the stacked boundary matrix survives the cutoff")]
    RankZero,
    #[error("threshold must lie in (0, 1), got {0}")]
    BadThreshold(f64),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

/// Boundary data of a trial basis sampled on a quadrature, plus the two Gram
/// matrices: F for the boundary norm and G for the interior norm.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub energy: f64,
    /// √w_m ξ_n(x_m)
    pub p: Array2<f64>,
    /// √w_m ∂ξ_n/∂x₁(x_m)
    pub p1: Array2<f64>,
    /// √w_m ∂ξ_n/∂x₂(x_m)
    pub p2: Array2<f64>,
    /// √((x_m·n_m)/(2E)) √w_m ∂ξ_n/∂n(x_m)
    pub q: Array2<f64>,
    pub f: Array2<f64>,
    pub g: Array2<f64>,
    pub nodes: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub xdotn: Vec<f64>,
}

/// Boundary data blocks (rows scaled by √w) of any coefficient representation.
pub(crate) struct BoundaryBlocks<'a> {
    pub p: ArrayView2<'a, f64>,
    pub p1: ArrayView2<'a, f64>,
    pub p2: ArrayView2<'a, f64>,
}

impl BoundaryBlocks<'_> {
    /// ∂/∂n rows.
    pub fn normal_derivative(&self, normals: &[[f64; 2]]) -> Array2<f64> {
        let n1 = Array1::from_iter(normals.iter().map(|n| n[0])).insert_axis(Axis(1));
        let n2 = Array1::from_iter(normals.iter().map(|n| n[1])).insert_axis(Axis(1));
        &self.p1 * &n1 + &self.p2 * &n2
    }

    /// Interior-norm Gram from the identity, valid for (Δ + E)u = 0 in a
    /// star-shaped domain,
    ///   2E‖u‖² = ∮ 2(x·∇u)∂ₙu - (x·n)|∇u|² + E(x·n)u² ds.
    pub fn interior_gram(&self, energy: f64, nodes: &[[f64; 2]], normals: &[[f64; 2]], xdotn: &[f64]) -> Array2<f64> {
        let col = |f: &dyn Fn(usize) -> f64| Array1::from_iter((0..nodes.len()).map(f)).insert_axis(Axis(1));
        let x1 = col(&|i| nodes[i][0]);
        let x2 = col(&|i| nodes[i][1]);
        let h = col(&|i| xdotn[i]);
        let radial = &self.p1 * &x1 + &self.p2 * &x2;
        let normal = self.normal_derivative(normals);
        let cross = radial.t().dot(&normal);
        let mut g = &cross + &cross.t();
        g -= &self.p1.t().dot(&(&self.p1 * &h));
        g -= &self.p2.t().dot(&(&self.p2 * &h));
        g.scaled_add(energy, &self.p.t().dot(&(&self.p * &h)));
        g /= 2.0 * energy;
        symmetrize(&mut g);
        g
    }
}

pub(crate) fn symmetrize(a: &mut Array2<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

pub fn assemble<B: TrialBasis + ?Sized>(q: &BoundaryQuadrature, basis: &B) -> Result<AssembledSystem, DiscretizationError> {
    let vals = basis.eval(&q.nodes)?;
    let (m, n) = (q.m, basis.len());
    for (name, a) in [("values", &vals.values), ("x1-derivatives", &vals.dx), ("x2-derivatives", &vals.dy)] {
        if a.dim() != (m, n) {
            return Err(DiscretizationError::DimensionMismatch(format!(
                "basis {name} are {:?}, expected ({m}, {n})",
                a.dim()
            )));
        }
    }
    let energy = basis.energy();
    let sw = Array1::from_iter(q.weights.iter().map(|w| w.sqrt())).insert_axis(Axis(1));
    let p = &vals.values * &sw;
    let p1 = &vals.dx * &sw;
    let p2 = &vals.dy * &sw;
    let blocks = BoundaryBlocks { p: p.view(), p1: p1.view(), p2: p2.view() };
    let qscale = Array1::from_iter(q.xdotn.iter().map(|h| (h / (2.0 * energy)).sqrt())).insert_axis(Axis(1));
    let qm = blocks.normal_derivative(&q.normals) * &qscale;
    let mut f = p.t().dot(&p);
    symmetrize(&mut f);
    let g = blocks.interior_gram(energy, &q.nodes, &q.normals, &q.xdotn);
    Ok(AssembledSystem {
        energy,
        p,
        p1,
        p2,
        q: qm,
        f,
        g,
        nodes: q.nodes.clone(),
        normals: q.normals.clone(),
        xdotn: q.xdotn.clone(),
    })
}

impl AssembledSystem {
    pub fn m(&self) -> usize {
        self.p.nrows()
    }

    pub fn n(&self) -> usize {
        self.p.ncols()
    }

    pub fn stacked(&self) -> Array2<f64> {
        concatenate![Axis(0), self.p, self.p1, self.p2]
    }
}

/// Numerical column space of [P; P1; P2].
///
/// `left` holds the retained left singular vectors U_r (3M × R); the trial
/// function with coefficients c = V_r Σ_r⁻¹ a has boundary data U_r a.
#[derive(Debug, Clone)]
pub struct RegularizedSubspace {
    /// V_r, N × R with orthonormal columns.
    pub basis_matrix: Array2<f64>,
    pub rank: usize,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
    pub left: Array2<f64>,
}

pub fn regularize(sys: &AssembledSystem, threshold: f64) -> Result<RegularizedSubspace, DiscretizationError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(DiscretizationError::BadThreshold(threshold));
    }
    let a = sys.stacked();
    let (u, sigma, vt) = a
        .svddc(JobSvd::Some)
        .map_err(|e| DiscretizationError::Linalg(e.to_string()))?;
    let (u, vt) = (u.expect("requested U"), vt.expect("requested Vt"));
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let rank = sigma.iter().take_while(|&&s| s > 0.0 && s >= threshold * smax).count();
    if rank == 0 {
        return Err(DiscretizationError::RankZero);
    }
    Ok(RegularizedSubspace {
        basis_matrix: vt.slice(s![..rank, ..]).t().to_owned(),
        rank,
        threshold,
        singular_values: sigma.iter().take(rank).copied().collect(),
        left: u.slice(s![.., ..rank]).to_owned(),
    })
}

impl RegularizedSubspace {
    /// Basis coefficients c = V_r Σ_r⁻¹ a of subspace coordinates a.
    pub fn coefficients(&self, a: &Array1<f64>) -> Array1<f64> {
        let scaled = Array1::from_iter(a.iter().zip(&self.singular_values).map(|(x, s)| x / s));
        self.basis_matrix.dot(&scaled)
    }

    pub(crate) fn blocks(&self, m: usize) -> BoundaryBlocks<'_> {
        BoundaryBlocks {
            p: self.left.slice(s![..m, ..]),
            p1: self.left.slice(s![m..2 * m, ..]),
            p2: self.left.slice(s![2 * m.., ..]),
        }
    }
}

/// Interior Gram ∫_Ω ξ_i ξ_j by polar quadrature: trapezoid in θ and
/// Gauss–Legendre in ρ ∈ [0, r(θ)]. Validation oracle for the boundary identity.
pub fn interior_gram_polar<B: TrialBasis + ?Sized>(
    d: &RadialDomain,
    basis: &B,
    n_theta: usize,
    n_radial: usize,
) -> Result<Array2<f64>, DiscretizationError> {
    let (nodes, weights) = gauss_legendre(n_radial);
    let mut pts = Vec::with_capacity(n_theta * n_radial);
    let mut wts = Vec::with_capacity(n_theta * n_radial);
    for i in 0..n_theta {
        let t = 2.0 * PI * i as f64 / n_theta as f64;
        let r = d.radius(t).0;
        for (x, w) in nodes.iter().zip(&weights) {
            let rho = 0.5 * r * (x + 1.0);
            pts.push([rho * t.cos(), rho * t.sin()]);
            wts.push(w * 0.5 * r * rho * 2.0 * PI / n_theta as f64);
        }
    }
    let v = basis.eval(&pts)?.values;
    let sw = Array1::from_iter(wts.iter().map(|w| w.sqrt())).insert_axis(Axis(1));
    let vw = &v * &sw;
    Ok(vw.t().dot(&vw))
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const DUMP_MAGIC: &[u8; 4] = b"DRMX";

/// Writes `magic, rows: u64, cols: u64, energy: f64` then row-major f64 data,
/// all little-endian.
pub fn write_matrix<W: Write>(mut w: W, a: &Array2<f64>, energy: f64) -> io::Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(a.nrows() as u64).to_le_bytes())?;
    w.write_all(&(a.ncols() as u64).to_le_bytes())?;
    w.write_all(&energy.to_le_bytes())?;
    for v in a.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_matrix<R: Read>(mut r: R) -> io::Result<(Array2<f64>, f64)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "not a matrix dump"));
    }
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> io::Result<[u8; 8]> {
        r.read_exact(&mut word)?;
        Ok(word)
    };
    let rows = u64::from_le_bytes(next(&mut r)?) as usize;
    let cols = u64::from_le_bytes(next(&mut r)?) as usize;
    let energy = f64::from_le_bytes(next(&mut r)?);
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(f64::from_le_bytes(next(&mut r)?));
    }
    let a = Array2::from_shape_vec((rows, cols), data).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    Ok((a, energy))
}
