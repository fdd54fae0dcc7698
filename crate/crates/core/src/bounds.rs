//! Eigenvalue inclusion intervals and eigenfunction error bounds from
//! computed tensions, with every constant derived from the x·n extrema and
//! the ground state.

use crate::geometry::{geom_constants, GeomConstants, RadialDomain};
use crate::specfun::bessel_zeros;
use crate::tension::{find_minima, SolverConfig, TensionError, TensionSolver};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("domain is not strictly star-shaped (inf x·n = {0})")]
    NotStarShaped(f64),
    #[error("neighbouring eigenvalue {e_k} is not certified distinct from E = {e} (gap {gap:e} <= radii {radii:e})")]
    IndistinctNeighbor { e: f64, e_k: f64, gap: f64, radii: f64 },
    #[error("no tension minimum found below the inscribed-disk bound {0}")]
    NoGroundState(f64),
    #[error(transparent)]
    Tension(#[from] TensionError),
}

/// Certified lowest Dirichlet eigenvalue.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GroundState {
    pub e1: f64,
    pub radius: f64,
    pub tension: f64,
    /// π j₀₁² / area.
    pub faber_krahn: f64,
    /// j₀₁² / r_min², from the inscribed disk about the origin.
    pub inscribed: f64,
}

impl GroundState {
    /// Exactly known ground state (radius 0), e.g. for the disk.
    pub fn exact(e1: f64) -> Self {
        Self { e1, radius: 0.0, tension: 0.0, faber_krahn: e1, inscribed: e1 }
    }

    pub fn lower(&self) -> f64 {
        (self.e1 - self.radius).max(self.faber_krahn)
    }

    pub fn upper(&self) -> f64 {
        (self.e1 + self.radius).min(self.inscribed)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundConstants {
    pub sup_xdotn: f64,
    pub inf_xdotn: f64,
    pub c_a: f64,
    pub c_a_prime: f64,
    pub c_a_dblprime: f64,
    pub c_ht_all_e: f64,
    pub c_ht_hf: f64,
    pub c_all_e: f64,
    pub c_hf: f64,
    pub c_mp: f64,
    pub c_d: f64,
    pub ground: GroundState,
}

pub fn compute_constants(g: &GeomConstants, ground: GroundState) -> Result<BoundConstants, BoundsError> {
    let (sup, inf) = (g.sup_xdotn, g.inf_xdotn);
    if !(inf > 0.0) {
        return Err(BoundsError::NotStarShaped(inf));
    }
    let c_a = sup / inf;
    let c_a_prime = 1.0 / inf;
    let c_a_dblprime = 0.0;
    let c_ht_all_e = 4.0 * (c_a + c_a_prime) + 2f64.sqrt() * c_a_dblprime;
    let c_ht_hf = 2.0 * (1.0 + sup) / inf;
    let e1_hi = ground.upper();
    Ok(BoundConstants {
        sup_xdotn: sup,
        inf_xdotn: inf,
        c_a,
        c_a_prime,
        c_a_dblprime,
        c_ht_all_e,
        c_ht_hf,
        c_all_e: (c_ht_all_e * (1.0 + 14.0 * e1_hi.max(4.0) * e1_hi)).sqrt(),
        c_hf: c_ht_hf.sqrt(),
        // Stekloff lower bound q₁ ≥ √E₁ inf(x·n) / (2 sup(x·n))
        c_mp: (2.0 * sup / (ground.lower().sqrt() * inf)).sqrt(),
        c_d: 2.0 * e1_hi.sqrt(),
        ground,
    })
}

impl BoundConstants {
    /// (name, value, formula) rows for reports.
    pub fn table(&self) -> Vec<(&'static str, f64, &'static str)> {
        vec![
            ("sup_xdotn", self.sup_xdotn, "sup over boundary of x.n"),
            ("inf_xdotn", self.inf_xdotn, "inf over boundary of x.n"),
            ("C_a", self.c_a, "sup/inf"),
            ("C_a'", self.c_a_prime, "1/inf"),
            ("C_a''", self.c_a_dblprime, "0 for the radial field"),
            ("c_ht_allE", self.c_ht_all_e, "4(C_a + C_a') + sqrt(2) C_a''"),
            ("c_ht_hf", self.c_ht_hf, "2(1 + sup)/inf"),
            ("C_allE", self.c_all_e, "sqrt(c_ht_allE (1 + 14 max(E1,4) E1)), E1 upper"),
            ("C_hf", self.c_hf, "sqrt(c_ht_hf)"),
            ("C_MP", self.c_mp, "sqrt(2 sup / (sqrt(E1) inf)), E1 lower"),
            ("C_d", self.c_d, "2 sqrt(E1), E1 upper"),
            ("E1", self.ground.e1, "refined ground state"),
            ("E1_radius", self.ground.radius, "Moler-Payne radius at E1"),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    MolerPayne,
    #[serde(rename = "ThmB_allE")]
    ThmBAllE,
    #[serde(rename = "ThmB_hf")]
    ThmBHf,
    StarSharp,
    StarFull,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertifiedInterval {
    pub e_center: f64,
    pub radius: f64,
    pub kind: BoundKind,
    /// Tension fed to the bound (t or t_s).
    pub tension: f64,
    pub constant: f64,
    /// False only for the diagnostic form with user-supplied constants.
    pub certified: bool,
}

impl CertifiedInterval {
    pub fn contains(&self, e: f64) -> bool {
        (e - self.e_center).abs() <= self.radius
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Asymptotic forms are used only when (tension)·√E is below this.
    pub small_tension_guard: f64,
    /// User constants (c₁, c₂) for the uncertified full weighted bound.
    pub star_full: Option<(f64, f64)>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { small_tension_guard: 1e-3, star_full: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Omitted {
    pub kind: BoundKind,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certification {
    pub intervals: Vec<CertifiedInterval>,
    pub omitted: Vec<Omitted>,
    pub tightest: Option<BoundKind>,
}

pub fn certify(e: f64, t: f64, t_s: f64, k: &BoundConstants, opts: &CertifyOptions) -> Certification {
    let mut intervals = Vec::new();
    let mut omitted = Vec::new();
    let mut push = |kind, radius: f64, tension, constant, certified| {
        intervals.push(CertifiedInterval { e_center: e, radius, kind, tension, constant, certified })
    };
    let mut skip = |kind, reason: &str| omitted.push(Omitted { kind, reason: reason.to_string() });
    let se = e.sqrt();
    push(BoundKind::MolerPayne, k.c_mp * e * t, t, k.c_mp, true);
    if e > 1.0 {
        push(BoundKind::ThmBAllE, k.c_all_e * se * t, t, k.c_all_e, true);
        if se * t < opts.small_tension_guard {
            push(BoundKind::ThmBHf, k.c_hf * se * t, t, k.c_hf, true);
        } else {
            skip(BoundKind::ThmBHf, "tension not small: t sqrt(E) above guard");
        }
        let f = e + se;
        if se * t_s < opts.small_tension_guard {
            push(BoundKind::StarSharp, (2.0 * f).sqrt() * t_s, t_s, (2.0 * f).sqrt(), true);
        } else {
            skip(BoundKind::StarSharp, "weighted tension not small: t_s sqrt(E) above guard");
        }
        match opts.star_full {
            Some((c1, c2)) if c2 * t_s * t_s < 1.0 => {
                let r = (2.0 * f).sqrt() * t_s * (1.0 + c1 * f.sqrt() * t_s) / (1.0 - c2 * t_s * t_s);
                push(BoundKind::StarFull, r, t_s, (2.0 * f).sqrt(), false);
            }
            Some(_) => skip(BoundKind::StarFull, "c2 t_s^2 >= 1"),
            None => skip(BoundKind::StarFull, "no user constants c1, c2"),
        }
    } else {
        for kind in [BoundKind::ThmBAllE, BoundKind::ThmBHf, BoundKind::StarSharp, BoundKind::StarFull] {
            skip(kind, "E <= 1");
        }
    }
    let tightest = intervals
        .iter()
        .filter(|i| i.certified)
        .min_by(|a, b| a.radius.total_cmp(&b.radius))
        .map(|i| i.kind);
    Certification { intervals, omitted, tightest }
}

impl Certification {
    pub fn tightest_interval(&self) -> Option<&CertifiedInterval> {
        let kind = self.tightest?;
        self.intervals.iter().find(|i| i.kind == kind)
    }

    pub fn get(&self, kind: BoundKind) -> Option<&CertifiedInterval> {
        self.intervals.iter().find(|i| i.kind == kind)
    }
}

/// Lower bound on the distance from E to the spectrum; `t_s` must be the
/// minimal weighted tension at E.
pub fn lower_bound_distance(e: f64, t_s: f64, c3: f64) -> f64 {
    let eff = e - c3 * e.sqrt();
    if eff > 0.0 {
        (2.0 * eff).sqrt() * t_s
    } else {
        0.0
    }
}

/// The lower bound as reported: only where t_s·√E is at or above the
/// small-tension guard. Closer to the spectrum the discrete minimum can sit
/// on the basis floor, above the true infimum, and the bound would overshoot.
pub fn reported_lower_bound(e: f64, t_s: f64, c3: f64, opts: &CertifyOptions) -> Option<f64> {
    (t_s * e.sqrt() >= opts.small_tension_guard).then(|| lower_bound_distance(e, t_s, c3))
}

/// A priori cap 2√(E₁E) on the distance from E to the spectrum.
pub fn distance_prior(e: f64, e1: f64) -> f64 {
    2.0 * (e1 * e).sqrt()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EigenfunctionErrorBound {
    pub e: f64,
    pub e_k: f64,
    pub l2_error_bound: f64,
    pub constant: f64,
    pub baseline_mp: f64,
}

/// L² distance from the normalized trial function to the eigenspace at E,
/// given the nearest other eigenvalue E_k and both certification radii.
pub fn eigenfunction_error(
    e: f64,
    t: f64,
    radius: f64,
    e_k: f64,
    radius_k: f64,
    k: &BoundConstants,
    opts: &CertifyOptions,
) -> Result<EigenfunctionErrorBound, BoundsError> {
    let gap = (e - e_k).abs();
    if gap <= radius + radius_k {
        return Err(BoundsError::IndistinctNeighbor { e, e_k, gap, radii: radius + radius_k });
    }
    let se = e.sqrt();
    let constant = if e > 1.0 && se * t < opts.small_tension_guard { k.c_hf } else { k.c_all_e };
    Ok(EigenfunctionErrorBound {
        e,
        e_k,
        l2_error_bound: constant * se * t / gap,
        constant,
        baseline_mp: k.c_mp * e * t / gap,
    })
}

/// Locates and certifies the lowest eigenvalue: scan between the
/// Faber–Krahn and inscribed-disk bounds, refine the lowest minimum, then
/// certify it with the Moler–Payne constant built from the Faber–Krahn bound.
pub fn certify_ground_state(d: &RadialDomain, config: &SolverConfig) -> Result<GroundState, BoundsError> {
    let g = geom_constants(d, 4096);
    let j01 = bessel_zeros(0, 1).zeros[0];
    let faber_krahn = PI * j01 * j01 / g.area;
    let inscribed = j01 * j01 / (g.r_min * g.r_min);
    let solver = TensionSolver::new(d, config.clone());
    let (lo, hi) = (0.95 * faber_krahn, 1.02 * inscribed);
    let samples = 80;
    let scan = solver.scan(lo, hi, samples)?;
    let step = (hi - lo) / (samples - 1) as f64;
    let candidates = find_minima(&scan);
    let mut refined = None;
    for c in &candidates {
        if let Ok(r) = solver.refine_minimum(c.energy, 0.25 * step) {
            refined = Some(r);
            break;
        }
    }
    let r = refined.ok_or(BoundsError::NoGroundState(inscribed))?;
    let boot = compute_constants(&g, GroundState { e1: faber_krahn, radius: 0.0, tension: 0.0, faber_krahn, inscribed })?;
    Ok(GroundState { e1: r.e_star, radius: boot.c_mp * r.e_star * r.t_star, tension: r.t_star, faber_krahn, inscribed })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: f64,
    pub formula: String,
}

/// Certification report; serializes to the JSON emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub domain: String,
    pub energy: f64,
    pub t: f64,
    pub t_s: f64,
    pub constants: Vec<ConstantEntry>,
    pub intervals: Vec<CertifiedInterval>,
    pub omitted: Vec<Omitted>,
    pub tightest: Option<BoundKind>,
    /// Absent when the weighted tension is below the small-tension guard.
    pub lower_bound: Option<f64>,
    pub lower_bound_form: String,
    pub distance_prior: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<EigenfunctionErrorBound>,
}

impl CertificationReport {
    pub fn new(domain: String, e: f64, t: f64, t_s: f64, k: &BoundConstants, opts: &CertifyOptions) -> Self {
        let c = certify(e, t, t_s, k, opts);
        Self {
            domain,
            energy: e,
            t,
            t_s,
            constants: k
                .table()
                .into_iter()
                .map(|(n, v, f)| ConstantEntry { name: n.into(), value: v, formula: f.into() })
                .collect(),
            intervals: c.intervals,
            omitted: c.omitted,
            tightest: c.tightest,
            lower_bound: reported_lower_bound(e, t_s, k.c_d, opts),
            lower_bound_form: "sqrt(2(E - C_d sqrt(E))) t_s".into(),
            distance_prior: distance_prior(e, k.ground.upper()),
            eigenfunction: None,
        }
    }
}
