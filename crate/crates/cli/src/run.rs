use crate::config::parse_range;
use crate::{CertifyArgs, EvalModeArgs, ScanArgs, SolveArgs, SolverArgs, VerifyArgs};
use drumcert::basis::{build_mfs, disk_mode, disk_spectrum, DiskModeBasis, Parity, TrialBasis};
use drumcert::bounds::{
    certify_ground_state, compute_constants, eigenfunction_error, BoundConstants, BoundsError, CertificationReport,
    CertifyOptions, GroundState,
};
use drumcert::geometry::{geom_constants, DomainSpec, GeometryError, RadialDomain};
use drumcert::qo::{
    disk_quadrature, disk_window_gram, pairwise_audit, quasimode_audit, rellich_check, weyl_check, write_jsonl,
    QoRecord,
};
use drumcert::tension::{
    eval_mode as grid_eval, find_minima, write_mode_csv, write_scan_csv, Method, MinimumRecord, SolverConfig,
    TensionError, TensionSolver,
};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl From<TensionError> for CliError {
    fn from(e: TensionError) -> Self {
        match e {
            TensionError::BadEnergy(_)
            | TensionError::BadWindow { .. }
            | TensionError::Geometry(_)
            | TensionError::Basis(_) => Self::Config(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::NotStarShaped(_) => Self::Config(e.to_string()),
            BoundsError::Tension(t) => t.into(),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{}: {e}", path.display()))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err(p))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Config(e.to_string()))
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing --{flag}")))
}

fn domain_of(s: &SolverArgs) -> Result<(DomainSpec, RadialDomain), CliError> {
    let spec: DomainSpec = require(s.domain.as_deref(), "domain")?.parse().map_err(|e: GeometryError| CliError::Config(e.to_string()))?;
    let d = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
    Ok((spec, d))
}

fn solver_config(s: &SolverArgs) -> Result<SolverConfig, CliError> {
    let mut c = SolverConfig {
        n: s.n.and_then(|v| v.get()),
        m: s.m.and_then(|v| v.get()),
        auto_delta: s.auto_delta,
        ..Default::default()
    };
    if let Some(d) = s.delta {
        if !(d > 0.0 && d.is_finite()) {
            return Err(CliError::Config(format!("--delta must be positive, got {d}")));
        }
        c.delta = d;
    }
    if let Some(t) = s.threshold {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Config(format!("--threshold must lie in (0, 1), got {t}")));
        }
        c.threshold = t;
    }
    if let Some(m) = &s.method {
        c.method = m.parse().map_err(CliError::Config)?;
    }
    if let Some(m) = c.m {
        if m < 16 {
            return Err(CliError::Config(format!("--m must be at least 16, got {m}")));
        }
    }
    Ok(c)
}

/// Constants for the domain, with a ground state computed at automatic
/// resolution unless supplied.
fn constants(d: &RadialDomain, cfg: &SolverConfig, given: Option<GroundState>) -> Result<BoundConstants, CliError> {
    let ground = match given {
        Some(g) => g,
        None => {
            let low = SolverConfig { n: None, m: None, method: Method::Auto, ..cfg.clone() };
            certify_ground_state(d, &low)?
        }
    };
    Ok(compute_constants(&geom_constants(d, 8192), ground)?)
}

pub fn scan(a: &ScanArgs) -> Result<(), CliError> {
    let (_, d) = domain_of(&a.solver)?;
    let cfg = solver_config(&a.solver)?;
    let (lo, hi) = parse_range(&require(a.e_range.clone(), "e-range")?).map_err(CliError::Config)?;
    let samples = a.samples.unwrap_or(500);
    if lo <= 0.0 || samples < 3 {
        return Err(CliError::Config("scan needs lo > 0 and at least 3 samples".into()));
    }
    let solver = TensionSolver::new(&d, cfg);
    let curve = solver.scan(lo, hi, samples)?;
    let mut w = output(&a.out)?;
    write_scan_csv(&mut w, &curve).and_then(|_| w.flush()).map_err(|e| CliError::Config(e.to_string()))?;
    let minima = find_minima(&curve);
    for m in &minima {
        eprintln!("minimum E={:.16e} t={:.6e}{}", m.energy, m.t, if m.plateau { " plateau" } else { "" });
    }
    if a.minima_out.is_some() {
        write_json(&a.minima_out, &minima)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MinimumSummary<'a> {
    e_star: f64,
    t: f64,
    t_s: f64,
    t_s_at_t_min: f64,
    t_next: f64,
    iterations: usize,
    multiplicity: usize,
    delta: f64,
    n: usize,
    m: usize,
    rank: usize,
    method: Method,
    history: &'a [drumcert::tension::RefineStep],
}

impl<'a> From<&'a MinimumRecord> for MinimumSummary<'a> {
    fn from(r: &'a MinimumRecord) -> Self {
        Self {
            e_star: r.e_star,
            t: r.t_star,
            t_s: r.t_s_star,
            t_s_at_t_min: r.result.t_s_at_t_min,
            t_next: r.result.t_next,
            iterations: r.iterations,
            multiplicity: r.multiplicity,
            delta: r.delta,
            n: r.result.n,
            m: r.result.m,
            rank: r.result.rank,
            method: r.result.method,
            history: &r.history,
        }
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    minimum: MinimumSummary<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    neighbour: Option<MinimumSummary<'a>>,
    certification: CertificationReport,
}

/// Trial function stored for `eval-mode`.
#[derive(Serialize, Deserialize)]
pub struct ModeFile {
    pub domain: String,
    pub energy: f64,
    pub basis: ModeBasis,
    pub coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModeBasis {
    Mfs { delta: f64, n: usize },
    DiskModes { modes: Vec<(u32, u32, Parity)> },
}

fn refine(solver: &TensionSolver, e: f64, h0: f64) -> Result<MinimumRecord, CliError> {
    solver.refine_minimum(e, h0).map_err(|err| match err {
        TensionError::NotConverged { .. } => CliError::Numerical(err.to_string()),
        other => other.into(),
    })
}

pub fn solve(a: &SolveArgs) -> Result<(), CliError> {
    let (spec, d) = domain_of(&a.solver)?;
    let mut cfg = solver_config(&a.solver)?;
    if a.gsvd {
        cfg.method = Method::Gsvd;
    }
    let guess = require(a.e_guess, "e-guess")?;
    if !(guess > 0.0) {
        return Err(CliError::Config(format!("--e-guess must be positive, got {guess}")));
    }
    let h0 = a.h0.unwrap_or(1e-4 * guess);
    let opts = CertifyOptions { star_full: a.c1.zip(a.c2), ..Default::default() };
    let solver = TensionSolver::new(&d, cfg.clone());
    let rec = refine(&solver, guess, h0)?;
    let k = constants(&d, &cfg, None)?;
    let mut report = CertificationReport::new(spec.to_string(), rec.e_star, rec.t_star, rec.t_s_star, &k, &opts);
    let neighbour = match a.e_k {
        Some(ek) => {
            let nrec = refine(&solver, ek, a.h0.unwrap_or(1e-4 * ek))?;
            let own = tightest_radius(&report);
            let other = CertificationReport::new(spec.to_string(), nrec.e_star, nrec.t_star, nrec.t_s_star, &k, &opts);
            report.eigenfunction = Some(
                eigenfunction_error(rec.e_star, rec.t_star, own, nrec.e_star, tightest_radius(&other), &k, &opts)
                    .map_err(|e| CliError::Numerical(e.to_string()))?,
            );
            Some(nrec)
        }
        None => None,
    };
    if a.coeffs_out.is_some() {
        let file = ModeFile {
            domain: spec.to_string(),
            energy: rec.e_star,
            basis: ModeBasis::Mfs { delta: rec.delta, n: rec.result.n },
            coeffs: rec.result.coeffs.clone(),
        };
        write_json(&a.coeffs_out, &file)?;
    }
    if let Some(path) = &a.grid_out {
        let basis = build_mfs(&d, rec.e_star, rec.result.n, rec.delta).map_err(|e| CliError::Numerical(e.to_string()))?;
        write_grid(&d, &basis, &rec.result.coeffs, a.grid_h.unwrap_or(0.005), &Some(path.clone()))?;
    }
    let out = SolveReport {
        minimum: (&rec).into(),
        neighbour: neighbour.as_ref().map(Into::into),
        certification: report,
    };
    write_json(&a.out, &out)
}

fn tightest_radius(r: &CertificationReport) -> f64 {
    r.tightest
        .and_then(|k| r.intervals.iter().find(|i| i.kind == k))
        .map_or(f64::INFINITY, |i| i.radius)
}

pub fn certify(a: &CertifyArgs) -> Result<(), CliError> {
    let (spec, d) = domain_of(&a.solver)?;
    let cfg = solver_config(&a.solver)?;
    let e = require(a.e, "e")?;
    let t = require(a.t, "t")?;
    let t_s = require(a.t_s, "t-s")?;
    if !(e > 0.0 && t >= 0.0 && t_s >= 0.0) {
        return Err(CliError::Config("need E > 0 and nonnegative tensions".into()));
    }
    let ground = match a.e1 {
        Some(e1) => {
            let g = geom_constants(&d, 8192);
            let j01sq = 5.783185962946784;
            Some(GroundState {
                e1,
                radius: a.e1_radius.unwrap_or(0.0),
                tension: 0.0,
                faber_krahn: std::f64::consts::PI * j01sq / g.area,
                inscribed: j01sq / (g.r_min * g.r_min),
            })
        }
        None => None,
    };
    let k = constants(&d, &cfg, ground)?;
    let opts = CertifyOptions { star_full: a.c1.zip(a.c2), ..Default::default() };
    let mut report = CertificationReport::new(spec.to_string(), e, t, t_s, &k, &opts);
    if let Some(ek) = a.e_k {
        let own = tightest_radius(&report);
        report.eigenfunction = Some(
            eigenfunction_error(e, t, own, ek, a.radius_k.unwrap_or(0.0), &k, &opts)
                .map_err(|err| CliError::Numerical(err.to_string()))?,
        );
    }
    write_json(&a.out, &report)
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let suite = a.suite.clone().unwrap_or_else(|| "all".into());
    let known = ["rellich", "pairwise", "window", "weyl", "quasimode", "all"];
    if !known.contains(&suite.as_str()) {
        return Err(CliError::Config(format!("unknown suite '{suite}' ({})", known.join(", "))));
    }
    let e_max = a.e_max.unwrap_or(2000.0);
    let e = a.e.unwrap_or(1000.0);
    let width = a.width.unwrap_or(1.0);
    if !(e_max > 0.0 && e > 0.0 && width > 0.0) {
        return Err(CliError::Config("--e-max, --e and --width must be positive".into()));
    }
    let disk = DomainSpec::Disk.build().map_err(|e| CliError::Config(e.to_string()))?;
    let g = geom_constants(&disk, 1024);
    let c_ht = compute_constants(&g, GroundState::exact(5.783185962946784))?.c_ht_hf;
    let geo = |e: GeometryError| CliError::Numerical(e.to_string());
    let run = |name: &str| suite == "all" || suite == name;
    let mut recs: Vec<QoRecord> = Vec::new();
    if run("rellich") {
        let count = a.modes.unwrap_or(50);
        let mut e_top = 100.0;
        let modes = loop {
            let s = disk_spectrum(e_top);
            if s.len() >= count {
                break s;
            }
            e_top *= 2.0;
        };
        let modes = &modes[..count];
        let m_max = modes.iter().map(|m| m.m).max().unwrap_or(0).max(24);
        let q = disk_quadrature(m_max).map_err(geo)?;
        recs.extend(modes.iter().map(|m| rellich_check(m, &q)));
    }
    if run("pairwise") {
        recs.extend(pairwise_audit(e_max, g.s).map_err(geo)?);
    }
    if run("window") {
        let w = disk_window_gram(e, width).map_err(geo)?;
        recs.push(QoRecord::new("window", format!("E={e} c={width} modes={}", w.modes.len()), w.op_norm_plain / e, c_ht));
    }
    if run("weyl") {
        recs.extend(weyl_check(e_max).iter().map(|r| {
            QoRecord::new("weyl", format!("E={:.16e} N={}", r.energy, r.count), r.remainder.abs(), 3.0 * r.energy.sqrt())
        }));
    }
    if run("quasimode") {
        let w = disk_window_gram(e, width).map_err(geo)?;
        recs.extend(quasimode_audit(&w, a.trials.unwrap_or(100), a.seed.unwrap_or(0), c_ht));
    }
    let mut w = output(&a.out)?;
    write_jsonl(&mut w, &recs).and_then(|_| w.flush()).map_err(|e| CliError::Config(e.to_string()))?;
    let failed = recs.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {failed} violations", recs.len());
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} checks failed")));
    }
    Ok(())
}

fn write_grid<B: TrialBasis + ?Sized>(
    d: &RadialDomain,
    basis: &B,
    coeffs: &[f64],
    h: f64,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    if !(h > 0.0) {
        return Err(CliError::Config(format!("--grid-h must be positive, got {h}")));
    }
    let grid = grid_eval(d, basis, coeffs, h)?;
    let mut w = output(out)?;
    write_mode_csv(&mut w, &grid).and_then(|_| w.flush()).map_err(|e| CliError::Config(e.to_string()))
}

pub fn eval_mode(a: &EvalModeArgs) -> Result<(), CliError> {
    let path = require(a.coeffs.clone(), "coeffs")?;
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    let file: ModeFile =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if file.coeffs.is_empty() {
        return Err(CliError::Config(format!("{}: no coefficients", path.display())));
    }
    let spec: DomainSpec = file.domain.parse().map_err(|e: GeometryError| CliError::Config(e.to_string()))?;
    let d = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
    let h = a.grid_h.unwrap_or(0.005);
    match &file.basis {
        ModeBasis::Mfs { delta, n } => {
            if *n != file.coeffs.len() {
                return Err(CliError::Config(format!("{} coefficients for a basis of {n}", file.coeffs.len())));
            }
            let b = build_mfs(&d, file.energy, *n, *delta).map_err(|e| CliError::Config(e.to_string()))?;
            write_grid(&d, &b, &file.coeffs, h, &a.out)
        }
        ModeBasis::DiskModes { modes } => {
            if modes.len() != file.coeffs.len() {
                return Err(CliError::Config(format!("{} coefficients for {} modes", file.coeffs.len(), modes.len())));
            }
            let modes = modes
                .iter()
                .map(|&(m, k, p)| disk_mode(m, k, p))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let b = DiskModeBasis { energy: file.energy, modes };
            write_grid(&d, &b, &file.coeffs, h, &a.out)
        }
    }
}
