//! Audits of the boundary-trace identities and quasi-orthogonality bounds
//! against the analytic disk spectrum, plus Weyl counting.

use crate::basis::{disk_spectrum, DiskMode, TrialBasis};
use crate::discretization::symmetrize;
use crate::geometry::{build_quadrature, BoundaryQuadrature, DomainSpec, GeometryError};
use ndarray::{Array1, Array2, Axis};
use ndarray_linalg::{Eigh, UPLO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, Write};

/// One audit outcome, written as a JSON line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QoRecord {
    pub check: String,
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl QoRecord {
    pub fn new(check: &str, label: String, lhs: f64, rhs: f64) -> Self {
        Self { check: check.into(), label, lhs, rhs, margin: rhs - lhs, pass: lhs <= rhs }
    }
}

pub fn write_jsonl<W: Write>(mut w: W, records: &[QoRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn mode_label(m: &DiskMode) -> String {
    let p = match m.parity {
        crate::basis::Parity::Cos => "c",
        crate::basis::Parity::Sin => "s",
    };
    format!("({},{},{p})", m.m, m.k)
}

/// Nodes for disk traces up to angular order `m_max`: eight per oscillation.
pub fn disk_quadrature(m_max: u32) -> Result<BoundaryQuadrature, GeometryError> {
    build_quadrature(&DomainSpec::Disk.build()?, 8 * m_max as usize + 64)
}

/// ψ = ∂ₙφ sampled at the quadrature nodes.
pub fn disk_traces(modes: &[DiskMode], q: &BoundaryQuadrature) -> Array2<f64> {
    Array2::from_shape_fn((modes.len(), q.m), |(i, j)| modes[i].boundary_trace(q.thetas[j]))
}

/// ∂ₙu of u = Σ c_n ξ_n at the quadrature nodes.
pub fn normal_trace<B: TrialBasis + ?Sized>(
    q: &BoundaryQuadrature,
    basis: &B,
    coeffs: &[f64],
) -> Result<Vec<f64>, crate::basis::BasisError> {
    let v = basis.eval(&q.nodes)?;
    let c = Array1::from(coeffs.to_vec());
    let (dx, dy) = (v.dx.dot(&c), v.dy.dot(&c));
    Ok((0..q.m).map(|i| dx[i] * q.normals[i][0] + dy[i] * q.normals[i][1]).collect())
}

/// |∮(x·n)ψ² ds − 2E|.
pub fn rellich_deviation(q: &BoundaryQuadrature, psi: &[f64], energy: f64) -> f64 {
    let f: Vec<f64> = psi.iter().zip(&q.xdotn).map(|(p, h)| h * p * p).collect();
    (q.integrate(&f) - 2.0 * energy).abs()
}

pub fn rellich_check(mode: &DiskMode, q: &BoundaryQuadrature) -> QoRecord {
    let psi: Vec<f64> = q.thetas.iter().map(|&t| mode.boundary_trace(t)).collect();
    let dev = rellich_deviation(q, &psi, mode.energy);
    QoRecord::new("rellich", mode_label(mode), dev, 1e-10)
}

/// Gram matrices of traces: plain ∮ψᵢψⱼ and weighted ∮(x·n)ψᵢψⱼ, the latter
/// being ⟨(x·n)ψᵢ, (x·n)ψⱼ⟩ in the (x·n)⁻¹-weighted product.
pub fn trace_grams(traces: &Array2<f64>, q: &BoundaryQuadrature) -> (Array2<f64>, Array2<f64>) {
    let w = Array1::from(q.weights.clone()).insert_axis(Axis(0));
    let wh = Array1::from_iter(q.weights.iter().zip(&q.xdotn).map(|(w, h)| w * h)).insert_axis(Axis(0));
    let mut plain = (traces * &w).dot(&traces.t());
    let mut weighted = (traces * &wh).dot(&traces.t());
    symmetrize(&mut plain);
    symmetrize(&mut weighted);
    (plain, weighted)
}

pub fn largest_eigenvalue(a: &Array2<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let (lam, _) = a.eigh(UPLO::Lower).expect("symmetric eigensolver");
    lam.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Pairwise bound |∮(x·n)ψᵢψⱼ − 2Eᵢδᵢⱼ| ≤ S²(Eᵢ − Eⱼ)² with slack
/// 1e-8·max(Eᵢ, Eⱼ).
pub fn pairwise_qo_check(a: &DiskMode, b: &DiskMode, s: f64, q: &BoundaryQuadrature) -> QoRecord {
    let pa: Vec<f64> = q.thetas.iter().map(|&t| a.boundary_trace(t)).collect();
    let pb: Vec<f64> = q.thetas.iter().map(|&t| b.boundary_trace(t)).collect();
    let f: Vec<f64> = (0..q.m).map(|i| q.xdotn[i] * pa[i] * pb[i]).collect();
    pair_record(a, b, q.integrate(&f), s)
}

fn pair_record(a: &DiskMode, b: &DiskMode, integral: f64, s: f64) -> QoRecord {
    let same = a == b;
    let lhs = (integral - if same { 2.0 * a.energy } else { 0.0 }).abs();
    let rhs = s * s * (a.energy - b.energy).powi(2);
    let slack = 1e-8 * a.energy.max(b.energy);
    let mut r = QoRecord::new("pairwise", format!("{}x{}", mode_label(a), mode_label(b)), lhs, rhs + slack);
    r.margin = rhs + slack - lhs;
    r
}

/// Every pair of disk modes with energies ≤ `e_max`, through one weighted Gram.
pub fn pairwise_audit(e_max: f64, s: f64) -> Result<Vec<QoRecord>, GeometryError> {
    let modes = disk_spectrum(e_max);
    let m_max = modes.iter().map(|m| m.m).max().unwrap_or(0);
    let q = disk_quadrature(m_max)?;
    let (_, weighted) = trace_grams(&disk_traces(&modes, &q), &q);
    let mut out = Vec::with_capacity(modes.len() * (modes.len() + 1) / 2);
    for i in 0..modes.len() {
        for j in i..modes.len() {
            out.push(pair_record(&modes[i], &modes[j], weighted[(i, j)], s));
        }
    }
    Ok(out)
}

/// Trace Gram over the disk modes with |E_j − E| ≤ c√E.
#[derive(Debug, Clone)]
pub struct BoundaryGram {
    pub center: f64,
    pub half_width: f64,
    pub modes: Vec<DiskMode>,
    pub gram_plain: Array2<f64>,
    pub gram_weighted: Array2<f64>,
    pub op_norm_plain: f64,
}

pub fn disk_window_gram(e: f64, c: f64) -> Result<BoundaryGram, GeometryError> {
    let half_width = c * e.sqrt();
    let modes: Vec<DiskMode> =
        disk_spectrum(e + half_width).into_iter().filter(|m| (m.energy - e).abs() <= half_width).collect();
    let m_max = modes.iter().map(|m| m.m).max().unwrap_or(0);
    let q = disk_quadrature(m_max)?;
    let (gram_plain, gram_weighted) = trace_grams(&disk_traces(&modes, &q), &q);
    let op_norm_plain = largest_eigenvalue(&gram_plain);
    Ok(BoundaryGram { center: e, half_width, modes, gram_plain, gram_weighted, op_norm_plain })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowResult {
    pub energy: f64,
    pub width_factor: f64,
    pub modes: usize,
    pub op_norm: f64,
    pub ratio: f64,
}

/// Operator norm of Σψⱼ⟨ψⱼ,·⟩ over the window and its ratio to E.
pub fn window_qo_check(e: f64, c: f64) -> Result<WindowResult, GeometryError> {
    let g = disk_window_gram(e, c)?;
    Ok(WindowResult { energy: e, width_factor: c, modes: g.modes.len(), op_norm: g.op_norm_plain, ratio: g.op_norm_plain / e })
}

/// ‖Σcⱼψⱼ‖² against c_ht·E with 10% slack, for unit coefficient vectors.
pub fn quasimode_bound_check(gram: &BoundaryGram, coeffs: &[f64], c_ht: f64) -> QoRecord {
    let c = Array1::from(coeffs.to_vec());
    let lhs = c.dot(&gram.gram_plain.dot(&c));
    QoRecord::new("quasimode", format!("window E={}", gram.center), lhs, 1.1 * c_ht * gram.center)
}

/// `trials` seeded random unit coefficient vectors plus the top Gram
/// eigenvector, each checked against the bound.
pub fn quasimode_audit(gram: &BoundaryGram, trials: usize, seed: u64, c_ht: f64) -> Vec<QoRecord> {
    let k = gram.modes.len();
    if k == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials + 1);
    for _ in 0..trials {
        let mut c: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        c.iter_mut().for_each(|x| *x /= n);
        out.push(quasimode_bound_check(gram, &c, c_ht));
    }
    let (lam, vecs) = gram.gram_plain.eigh(UPLO::Lower).expect("symmetric eigensolver");
    let top = lam.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    let mut adversarial = quasimode_bound_check(gram, &vecs.column(top).to_vec(), c_ht);
    adversarial.label.push_str(" top eigenvector");
    out.push(adversarial);
    out
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeylRow {
    pub energy: f64,
    pub count: usize,
    pub weyl: f64,
    pub remainder: f64,
}

/// N(E) = #{E_j < E} for the disk against E·area/4π = E/4, evaluated on both
/// sides of every eigenvalue up to `e_max`.
pub fn weyl_check(e_max: f64) -> Vec<WeylRow> {
    let spec: Vec<f64> = disk_spectrum(e_max).iter().map(|m| m.energy).collect();
    let mut rows = Vec::new();
    let mut i = 0;
    while i < spec.len() {
        let e = spec[i];
        let mut j = i;
        while j < spec.len() && spec[j] - e <= 1e-9 * e {
            j += 1;
        }
        for (energy, count) in [(e, i), (e * (1.0 + 1e-12), j)] {
            let weyl = energy * PI / (4.0 * PI);
            rows.push(WeylRow { energy, count, weyl, remainder: count as f64 - weyl });
        }
        i = j;
    }
    rows
}
