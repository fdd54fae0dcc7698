//! Minimal boundary tension t(E) = min ‖u‖_∂Ω / ‖u‖_Ω over the trial space,
//! its scan over an energy window, and local refinement of its minima.

use crate::basis::{build_mfs, BasisError, MfsBasis, TrialBasis};
use crate::discretization::{assemble, regularize, AssembledSystem, DiscretizationError, RegularizedSubspace};
use crate::geometry::{build_quadrature, geom_constants, GeometryError, RadialDomain};
use ndarray::{concatenate, s, Array1, Array2, Axis};
use ndarray_linalg::{Eigh, QR, SVD, UPLO};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
    #[error("interior Gram is indefinite (smallest eigenvalue {min_eig:e} of {max_eig:e})")]
    IndefiniteInteriorNorm { min_eig: f64, max_eig: f64 },
    #[error("refinement from E = {start} did not converge (t = {t:e} at E = {energy})")]
    NotConverged { start: f64, energy: f64, t: f64, record: Box<MinimumRecord> },
    #[error("energy must be positive and finite, got {0}")]
    BadEnergy(f64),
    #[error("invalid scan window [{lo}, {hi}] with {samples} samples")]
    BadWindow { lo: f64, hi: f64, samples: usize },
    #[error("no admissible charge offset in the ladder")]
    NoAdmissibleDelta,
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

fn linalg(e: ndarray_linalg::error::LinalgError) -> TensionError {
    TensionError::Linalg(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gevp,
    Gsvd,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gevp" => Ok(Self::Gevp),
            "gsvd" => Ok(Self::Gsvd),
            "auto" => Ok(Self::Auto),
            _ => Err(format!("unknown method '{s}' (gevp, gsvd, auto)")),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gevp => "gevp",
            Self::Gsvd => "gsvd",
            Self::Auto => "auto",
        })
    }
}

/// Auto hands over to the direct route below this tension. The squared route
/// bottoms out near 3e-7, so the hand-over sits well above that floor.
pub const GEVP_SWITCH: f64 = 1e-5;

/// Offsets tried when the charge offset is chosen per minimum.
pub const DELTA_LADDER: [f64; 8] = [0.08, 0.10, 0.12, 0.14, 0.157, 0.2, 0.25, 0.3];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Basis size; `None` picks it from M.
    pub n: Option<usize>,
    /// Quadrature size; `None` picks it from the perimeter and E.
    pub m: Option<usize>,
    pub delta: f64,
    /// Re-select the charge offset from [`DELTA_LADDER`] at each refined minimum.
    pub auto_delta: bool,
    pub threshold: f64,
    pub method: Method,
    /// Refined minima above this tension are rejected as spurious.
    pub basin_tension: f64,
    pub rtol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: None,
            m: None,
            delta: 0.157,
            auto_delta: false,
            threshold: 1e-14,
            method: Method::Auto,
            basin_tension: 1e-5,
            rtol: 1e-13,
            max_iter: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensionResult {
    pub energy: f64,
    /// Minimal tension ‖u‖_∂Ω / ‖u‖_Ω.
    pub t: f64,
    /// Minimal weighted tension ‖(x·n)^{-1/2} u‖_∂Ω / ‖u‖_Ω, minimized on its own.
    pub t_s: f64,
    /// Weighted tension of the minimizer of `t`.
    pub t_s_at_t_min: f64,
    /// Second smallest tension (tracks a nearby or repeated eigenvalue).
    pub t_next: f64,
    /// Coefficients of the minimizer of `t`, normalized to ‖u‖_Ω = 1.
    pub coeffs: Vec<f64>,
    pub rank: usize,
    pub method: Method,
    pub delta: f64,
    pub n: usize,
    pub m: usize,
}

struct Minimizer {
    value: f64,
    next: f64,
    a: Array1<f64>,
}

fn quad_form(a: &Array1<f64>, g: &Array2<f64>) -> f64 {
    a.dot(&g.dot(a))
}

/// Smallest Rayleigh quotient aᵀFa / aᵀGa after dropping the numerically null
/// directions of G.
fn gevp_min(g: &Array2<f64>, f: &Array2<f64>) -> Result<Minimizer, TensionError> {
    let (lam, w) = g.eigh(UPLO::Lower).map_err(linalg)?;
    let max = lam.iter().copied().fold(0.0, f64::max);
    let min = lam.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= 0.0 || min < -1e-10 * max {
        return Err(TensionError::IndefiniteInteriorNorm { min_eig: min, max_eig: max });
    }
    let keep: Vec<usize> = (0..lam.len()).filter(|&i| lam[i] > 1e-13 * max).collect();
    let wk = Array2::from_shape_fn((w.nrows(), keep.len()), |(r, c)| w[(r, keep[c])] / lam[keep[c]].sqrt());
    let mut b = wk.t().dot(&f.dot(&wk));
    crate::discretization::symmetrize(&mut b);
    let (mu, z) = b.eigh(UPLO::Lower).map_err(linalg)?;
    let a = wk.dot(&z.column(0));
    Ok(Minimizer {
        value: mu[0].max(0.0).sqrt(),
        next: mu.get(1).map_or(f64::INFINITY, |v| v.max(0.0).sqrt()),
        a,
    })
}

/// Smallest generalized singular value of the pair (top, bottom): QR of the
/// stacked matrix, then an SVD of the top block of the orthonormal factor.
fn gsvd_min(top: &Array2<f64>, bottom: &Array2<f64>) -> Result<Minimizer, TensionError> {
    let stacked = concatenate![Axis(0), *top, *bottom];
    let (z, r) = stacked.qr().map_err(linalg)?;
    let zt = z.slice(s![..top.nrows(), ..]).to_owned();
    let (_, sv, vt) = zt.svd(false, true).map_err(linalg)?;
    let vt = vt.expect("requested Vt");
    let k = sv.len() - 1;
    let v = vt.row(k).to_owned();
    let a = back_substitute(&r, &v);
    let ratio = |s: f64| s / (1.0 - s * s).max(f64::MIN_POSITIVE).sqrt();
    Ok(Minimizer {
        value: ratio(sv[k]),
        next: if k > 0 { ratio(sv[k - 1]) } else { f64::INFINITY },
        a,
    })
}

fn back_substitute(r: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
    let n = b.len();
    let mut x = b.clone();
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= r[(i, j)] * x[j];
        }
        x[i] = acc / r[(i, i)];
    }
    x
}

/// Tension data of an assembled system on a regularized subspace.
pub fn solve_system(sys: &AssembledSystem, sub: &RegularizedSubspace, method: Method) -> Result<TensionResult, TensionError> {
    let m = sys.m();
    let blocks = sub.blocks(m);
    let up = blocks.p.to_owned();
    let ga = blocks.interior_gram(sys.energy, &sys.nodes, &sys.normals, &sys.xdotn);
    let inv_sqrt_h = Array1::from_iter(sys.xdotn.iter().map(|h| 1.0 / h.sqrt())).insert_axis(Axis(1));
    let ps = &up * &inv_sqrt_h;

    let (plain, weighted, used) = match method {
        Method::Gsvd => {
            let qscale =
                Array1::from_iter(sys.xdotn.iter().map(|h| (h / (2.0 * sys.energy)).sqrt())).insert_axis(Axis(1));
            let qa = blocks.normal_derivative(&sys.normals) * &qscale;
            (gsvd_min(&up, &qa)?, gsvd_min(&ps, &qa)?, Method::Gsvd)
        }
        _ => {
            let fa = up.t().dot(&up);
            let fs = ps.t().dot(&ps);
            (gevp_min(&ga, &fa)?, gevp_min(&ga, &fs)?, Method::Gevp)
        }
    };

    let interior = |a: &Array1<f64>| quad_form(a, &ga).max(f64::MIN_POSITIVE).sqrt();
    let norm = interior(&plain.a);
    let a = &plain.a / norm;
    let boundary = up.dot(&a);
    let t = boundary.dot(&boundary).sqrt();
    let weighted_boundary = ps.dot(&a);
    let t_s_at_t_min = weighted_boundary.dot(&weighted_boundary).sqrt();
    let t_s = match used {
        Method::Gsvd => {
            let pa = ps.dot(&weighted.a);
            pa.dot(&pa).sqrt() / interior(&weighted.a)
        }
        _ => weighted.value,
    };
    let coeffs = sub.coefficients(&a).to_vec();
    Ok(TensionResult {
        energy: sys.energy,
        t: if used == Method::Gsvd { t } else { plain.value },
        t_s,
        t_s_at_t_min,
        t_next: plain.next,
        coeffs,
        rank: sub.rank,
        method: used,
        delta: 0.0,
        n: sys.n(),
        m,
    })
}

/// Regularizes, then solves with `method`; the squared route is retried once
/// with a coarser cutoff when the interior Gram comes out indefinite, and
/// `Auto` falls through to the direct route near zero tension.
pub fn tension_of_system(sys: &AssembledSystem, threshold: f64, method: Method) -> Result<TensionResult, TensionError> {
    let sub = regularize(sys, threshold)?;
    match method {
        Method::Gsvd => solve_system(sys, &sub, Method::Gsvd),
        Method::Gevp => match solve_system(sys, &sub, Method::Gevp) {
            Err(TensionError::IndefiniteInteriorNorm { .. }) => {
                let coarse = regularize(sys, (threshold * 100.0).min(0.5))?;
                solve_system(sys, &coarse, Method::Gevp)
            }
            r => r,
        },
        Method::Auto => match tension_of_system(sys, threshold, Method::Gevp) {
            Ok(r) if r.t >= GEVP_SWITCH => Ok(r),
            Ok(_) | Err(TensionError::IndefiniteInteriorNorm { .. }) => solve_system(sys, &sub, Method::Gsvd),
            Err(e) => Err(e),
        },
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanSample {
    pub energy: f64,
    pub t: f64,
    pub t_s: f64,
    pub rank: usize,
    pub method: Method,
}

impl From<&TensionResult> for ScanSample {
    fn from(r: &TensionResult) -> Self {
        Self { energy: r.energy, t: r.t, t_s: r.t_s, rank: r.rank, method: r.method }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MinimumCandidate {
    pub index: usize,
    pub energy: f64,
    pub t: f64,
    /// Several equal samples formed the minimum; the lowest energy is kept.
    pub plateau: bool,
}

/// Interior local minima of a sampled tension curve.
pub fn find_minima(samples: &[ScanSample]) -> Vec<MinimumCandidate> {
    let mut out = Vec::new();
    let n = samples.len();
    let mut i = 1;
    while i + 1 < n {
        let t = samples[i].t;
        if !(t < samples[i - 1].t) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && samples[j + 1].t == t {
            j += 1;
        }
        if j + 1 < n && samples[j + 1].t > t {
            out.push(MinimumCandidate { index: i, energy: samples[i].energy, t, plateau: j > i });
        }
        i = j + 1;
    }
    out
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RefineStep {
    pub energy: f64,
    pub h: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimumRecord {
    pub e_star: f64,
    pub t_star: f64,
    pub t_s_star: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Tensions within a factor of the minimum, counting the minimizer.
    pub multiplicity: usize,
    pub delta: f64,
    pub history: Vec<RefineStep>,
    pub result: TensionResult,
}

pub fn write_scan_csv<W: Write>(mut w: W, samples: &[ScanSample]) -> io::Result<()> {
    writeln!(w, "E,t,t_s,rank,method")?;
    for s in samples {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{},{}", s.energy, s.t, s.t_s, s.rank, s.method)?;
    }
    Ok(())
}

/// Tension evaluation on a fixed domain with a fixed configuration.
pub struct TensionSolver<'a> {
    domain: &'a RadialDomain,
    perimeter: f64,
    pub config: SolverConfig,
}

impl<'a> TensionSolver<'a> {
    pub fn new(domain: &'a RadialDomain, config: SolverConfig) -> Self {
        let perimeter = geom_constants(domain, 2048).perimeter;
        Self { domain, perimeter, config }
    }

    pub fn domain(&self) -> &RadialDomain {
        self.domain
    }

    /// (N, M) at energy E: six nodes per boundary wavelength, at least 200.
    pub fn resolution(&self, energy: f64) -> (usize, usize) {
        let m = self.config.m.unwrap_or_else(|| {
            let raw = (6.0 * self.perimeter * energy.sqrt() / (2.0 * std::f64::consts::PI) - 1e-9).ceil() as usize;
            let m = raw.max(200);
            m + m % 2
        });
        let n = self.config.n.unwrap_or_else(|| (0.7 * m as f64).ceil() as usize);
        (n, m)
    }

    pub fn basis(&self, energy: f64, delta: f64) -> Result<MfsBasis, TensionError> {
        let (n, _) = self.resolution(energy);
        Ok(build_mfs(self.domain, energy, n, delta)?)
    }

    pub fn tension_with(&self, energy: f64, delta: f64, method: Method) -> Result<TensionResult, TensionError> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(TensionError::BadEnergy(energy));
        }
        let (n, m) = self.resolution(energy);
        let basis = build_mfs(self.domain, energy, n, delta)?;
        let q = build_quadrature(self.domain, m)?;
        let sys = assemble(&q, &basis)?;
        let mut r = tension_of_system(&sys, self.config.threshold, method)?;
        r.delta = delta;
        Ok(r)
    }

    pub fn tension_at(&self, energy: f64) -> Result<TensionResult, TensionError> {
        self.tension_with(energy, self.config.delta, self.config.method)
    }

    pub fn scan(&self, lo: f64, hi: f64, samples: usize) -> Result<Vec<ScanSample>, TensionError> {
        if !(lo > 0.0 && hi > lo && samples >= 2) {
            return Err(TensionError::BadWindow { lo, hi, samples });
        }
        let step = (hi - lo) / (samples - 1) as f64;
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let e = if i + 1 == samples { hi } else { lo + step * i as f64 };
                self.tension_at(e).map(|r| ScanSample::from(&r))
            })
            .collect()
    }

    fn refine_method(&self) -> Method {
        match self.config.method {
            Method::Gevp => Method::Gevp,
            _ => Method::Gsvd,
        }
    }

    /// Minimizes t² by successive three-point parabola fits starting at
    /// `guess` with half-width `h0`. The search stays within 50·h0 of the
    /// guess; leaving that range counts as failure to converge.
    pub fn refine_minimum(&self, guess: f64, h0: f64) -> Result<MinimumRecord, TensionError> {
        let record = self.refine_with_delta(guess, h0, self.config.delta)?;
        if !self.config.auto_delta {
            return finish(record, guess, self.config.basin_tension);
        }
        let best = DELTA_LADDER
            .iter()
            .filter_map(|&d| self.tension_with(record.e_star, d, self.refine_method()).ok())
            .min_by(|a, b| a.t.total_cmp(&b.t));
        // E* carries the first offset's error, so any improvement there is worth a re-refinement
        let record = match best {
            Some(r) if r.t < record.t_star && r.delta != record.delta => {
                let h = record.history.last().map_or(h0, |s| s.h).max(1e-12 * guess);
                let other = self.refine_with_delta(record.e_star, h * 10.0, r.delta)?;
                if other.converged && other.t_star < record.t_star { other } else { record }
            }
            _ => record,
        };
        finish(record, guess, self.config.basin_tension)
    }

    fn refine_with_delta(&self, guess: f64, h0: f64, delta: f64) -> Result<MinimumRecord, TensionError> {
        let method = self.refine_method();
        let t2 = |e: f64| -> Result<f64, TensionError> { Ok(self.tension_with(e, delta, method)?.t.powi(2)) };
        let h_min = 1e-12 * guess;
        let mut h = h0.max(h_min);
        let mut e = guess;
        let mut history = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        let mut f0 = t2(e)?;
        let reach = 50.0 * h;
        while iterations < self.config.max_iter && (e - guess).abs() <= reach {
            iterations += 1;
            let fm = t2(e - h)?;
            let fp = t2(e + h)?;
            history.push(RefineStep { energy: e, h, t: f0.sqrt() });
            let curv = fp - 2.0 * f0 + fm;
            if !(curv > 0.0) {
                // walk downhill without trusting the fit
                let (e_new, f_new) = if fm < fp { (e - h, fm) } else { (e + h, fp) };
                if f_new < f0 {
                    e = e_new;
                    f0 = f_new;
                    h *= 2.0;
                } else {
                    h = (h * 0.25).max(h_min);
                }
                continue;
            }
            let step = (h * (fm - fp) / (2.0 * curv)).clamp(-10.0 * h, 10.0 * h);
            let e_new = e + step;
            let mut f_new = t2(e_new)?;
            let mut accepted = f_new <= f0;
            let mut trial = step;
            // at h_min, backtrack a rejected fit before declaring the noise floor
            while !accepted && h <= h_min && trial.abs() > self.config.rtol * e.abs() && trial.abs() > step.abs() / 16.0 {
                trial *= 0.5;
                f_new = t2(e + trial)?;
                accepted = f_new <= f0;
            }
            let floor = !accepted && h <= h_min;
            if accepted {
                e += trial;
                f0 = f_new;
            }
            if trial.abs() <= self.config.rtol * e.abs() || floor {
                converged = true;
                break;
            }
            h = step.abs().clamp(h_min, h);
        }
        let result = self.tension_with(e, delta, method)?;
        let hf = history.last().map_or(h, |s: &RefineStep| s.h).max(h_min);
        let neighbours = [self.tension_with(e - hf, delta, method)?.t, self.tension_with(e + hf, delta, method)?.t];
        let local = neighbours.iter().all(|&t| result.t <= t * (1.0 + 1e-6));
        let floor = result.t.max(1e-12);
        let multiplicity = 1 + usize::from(result.t_next < 100.0 * floor);
        Ok(MinimumRecord {
            e_star: e,
            t_star: result.t,
            t_s_star: result.t_s,
            iterations,
            converged: converged && local,
            multiplicity,
            delta,
            history,
            result,
        })
    }

    /// Scans, then refines every candidate; refinements that fail are
    /// returned alongside the accepted minima.
    pub fn solve(&self, lo: f64, hi: f64, samples: usize) -> Result<SolveOutcome, TensionError> {
        let scan = self.scan(lo, hi, samples)?;
        let step = (hi - lo) / (samples - 1) as f64;
        let candidates = find_minima(&scan);
        let refined: Vec<_> = candidates
            .par_iter()
            .map(|c| (c, self.refine_minimum(c.energy, 0.25 * step)))
            .collect();
        let mut minima = Vec::new();
        let mut rejected = Vec::new();
        for (c, r) in refined {
            match r {
                Ok(m) => minima.push(m),
                Err(e) => rejected.push((*c, e.to_string())),
            }
        }
        minima.sort_by(|a, b| a.e_star.total_cmp(&b.e_star));
        minima.dedup_by(|a, b| (a.e_star - b.e_star).abs() <= 1e-10 * b.e_star);
        Ok(SolveOutcome { scan, minima, rejected })
    }
}

fn finish(record: MinimumRecord, start: f64, basin: f64) -> Result<MinimumRecord, TensionError> {
    if record.converged && record.t_star <= basin {
        Ok(record)
    } else {
        Err(TensionError::NotConverged { start, energy: record.e_star, t: record.t_star, record: Box::new(record) })
    }
}

#[derive(Debug)]
pub struct SolveOutcome {
    pub scan: Vec<ScanSample>,
    pub minima: Vec<MinimumRecord>,
    pub rejected: Vec<(MinimumCandidate, String)>,
}

/// Values of u = Σ c_n ξ_n on a square grid; points outside the domain are `None`.
#[derive(Debug, Clone)]
pub struct ModeGrid {
    pub h: f64,
    pub points: Vec<[f64; 2]>,
    pub values: Vec<Option<f64>>,
}

pub fn eval_mode<B: TrialBasis + ?Sized>(
    d: &RadialDomain,
    basis: &B,
    coeffs: &[f64],
    h: f64,
) -> Result<ModeGrid, TensionError> {
    let r_max = (0..4096)
        .map(|i| d.radius(2.0 * std::f64::consts::PI * i as f64 / 4096.0).0)
        .fold(0.0, f64::max)
        * 1.01;
    let k = (r_max / h).ceil() as i64;
    let points: Vec<[f64; 2]> =
        (-k..=k).flat_map(|j| (-k..=k).map(move |i| [i as f64 * h, j as f64 * h])).collect();
    let inside: Vec<usize> = (0..points.len()).filter(|&i| d.contains(points[i])).collect();
    let c = Array1::from(coeffs.to_vec());
    let mut values = vec![None; points.len()];
    for chunk in inside.chunks(4096) {
        let pts: Vec<[f64; 2]> = chunk.iter().map(|&i| points[i]).collect();
        let u = basis.eval(&pts)?.values.dot(&c);
        for (&i, v) in chunk.iter().zip(u) {
            values[i] = Some(v);
        }
    }
    Ok(ModeGrid { h, points, values })
}

pub fn write_mode_csv<W: Write>(mut w: W, grid: &ModeGrid) -> io::Result<()> {
    writeln!(w, "x,y,u")?;
    for (p, v) in grid.points.iter().zip(&grid.values) {
        if let Some(u) = v {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", p[0], p[1], u)?;
        }
    }
    Ok(())
}
