//! Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
//! numbers as arguments to run a subset.

use drumcert::basis::disk_spectrum;
use drumcert::bounds::{
    certify, certify_ground_state, compute_constants, eigenfunction_error, reported_lower_bound, BoundConstants,
    BoundKind, CertifyOptions,
};
use drumcert::geometry::{geom_constants, DomainSpec, RadialDomain};
use drumcert::qo::{disk_quadrature, pairwise_audit, rellich_check, weyl_check, window_qo_check};
use drumcert::tension::{Method, MinimumRecord, SolverConfig, TensionSolver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const BENCH_E: f64 = 10005.0213579739;
const BENCH_NEIGHBOUR: f64 = 10007.339;

/// Lowest minima of the warped benchmark domain with the stated formula,
/// from a higher-resolution run, kept as a regression reference.
const SMOOTH3_LOW: [f64; 20] = [
    7.311595234458,
    14.49076700245,
    16.853055575,
    24.56296531,
    30.342427762,
    31.776572274,
    38.58434996,
    43.247175446,
    49.509178226,
    50.13688701,
    54.7185006,
    64.0223948,
    68.3965023,
    74.726332657,
    74.969718837,
    85.86297862,
    87.82456718,
    91.37611028,
    98.29377267,
    99.61083239,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn disk() -> RadialDomain {
    DomainSpec::Disk.build().unwrap()
}

fn disk_levels(e_max: f64) -> Vec<f64> {
    disk_spectrum(e_max).iter().map(|m| m.energy).collect()
}

fn nearest(levels: &[f64], e: f64) -> f64 {
    levels.iter().map(|l| (l - e).abs()).fold(f64::INFINITY, f64::min)
}

fn disk_constants() -> BoundConstants {
    let d = disk();
    let ground = certify_ground_state(&d, &SolverConfig::default()).unwrap();
    compute_constants(&geom_constants(&d, 4096), ground).unwrap()
}

fn c1_disk_spectrum() -> Outcome {
    let d = disk();
    let cfg = SolverConfig { n: Some(100), m: Some(256), auto_delta: true, ..Default::default() };
    let solver = TensionSolver::new(&d, cfg);
    let out = solver.solve(4.0, 101.0, 971).unwrap();
    let mut found: Vec<f64> = Vec::new();
    for m in out.minima.iter().filter(|m| m.t_star < 1e-8) {
        found.extend(std::iter::repeat_n(m.e_star, m.multiplicity));
    }
    let oracle = disk_levels(120.0);
    if found.len() < 20 {
        return outcome(false, format!("only {} eigenvalues counted with multiplicity", found.len()));
    }
    let worst = found[..20]
        .iter()
        .zip(&oracle[..20])
        .map(|(f, o)| (f - o).abs() / o)
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("20 eigenvalues, max relative error {worst:.2e}"))
}

fn c2_soundness() -> Outcome {
    let d = disk();
    let k = disk_constants();
    let levels = disk_levels(2200.0);
    let solver = TensionSolver::new(&d, SolverConfig::default());
    let opts = CertifyOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut energies: Vec<f64> = (0..200).map(|_| rng.random_range(6.0..2000.0)).collect();
    // plus points close to eigenvalues, where the sharp forms are emitted
    let near: Vec<f64> = (0..100)
        .map(|_| {
            let l = levels[rng.random_range(0..levels.len() - 1)].max(6.0);
            let off = 10f64.powf(rng.random_range(-8.0..-2.0)) * l.sqrt();
            l + if rng.random::<bool>() { off } else { -off }
        })
        .collect();
    energies.extend(&near);
    let (mut intervals, mut bad, mut sharp, mut lower, mut bad_lower) = (0, 0, 0, 0, 0);
    for &e in &energies {
        let r = solver.tension_at(e).unwrap();
        let cert = certify(e, r.t, r.t_s, &k, &opts);
        for iv in cert.intervals.iter().filter(|i| i.certified) {
            intervals += 1;
            if iv.kind == BoundKind::StarSharp {
                sharp += 1;
            }
            if !levels.iter().any(|&l| iv.contains(l)) {
                bad += 1;
            }
        }
        if let Some(lb) = reported_lower_bound(e, r.t_s, k.c_d, &opts) {
            lower += 1;
            if nearest(&levels, e) < lb {
                bad_lower += 1;
            }
        }
    }
    outcome(
        bad == 0 && bad_lower == 0,
        format!(
            "{} energies, {intervals} intervals ({sharp} star-sharp), {bad} violations; {lower} lower bounds, {bad_lower} violations",
            energies.len()
        ),
    )
}

fn c3_low_frequency() -> Outcome {
    let d = DomainSpec::Smooth3.build().unwrap();
    let coarse = TensionSolver::new(&d, SolverConfig { n: Some(100), m: Some(200), ..Default::default() });
    let fine = TensionSolver::new(&d, SolverConfig { n: Some(150), m: Some(200), ..Default::default() });
    let out = coarse.solve(5.0, 101.0, 1921).unwrap();
    let minima: Vec<&MinimumRecord> = out.minima.iter().take(20).collect();
    if minima.len() < 20 {
        return outcome(false, format!("{} minima located", minima.len()));
    }
    let mut worst_stab: f64 = 0.0;
    let mut worst_ref: f64 = 0.0;
    for (m, r) in minima.iter().zip(SMOOTH3_LOW) {
        let f = match fine.refine_minimum(m.e_star, 1e-5 * m.e_star) {
            Ok(f) => f,
            Err(e) => return outcome(false, format!("N = 150 at {}: {e}", m.e_star)),
        };
        worst_stab = worst_stab.max((f.e_star - m.e_star).abs() / f.e_star);
        worst_ref = worst_ref.max((m.e_star - r).abs() / r);
    }
    outcome(
        worst_stab < 1e-8 && worst_ref < 1e-8,
        format!("20 minima, max relative change N=100->150 {worst_stab:.2e}, vs reference {worst_ref:.2e}"),
    )
}

struct Benchmark {
    record: MinimumRecord,
}

fn benchmark_solver(d: &RadialDomain) -> TensionSolver<'_> {
    let cfg = SolverConfig { n: Some(500), m: Some(700), auto_delta: true, method: Method::Gsvd, ..Default::default() };
    TensionSolver::new(d, cfg)
}

fn c4_high_frequency(bench: &mut Option<Benchmark>) -> Outcome {
    let d = DomainSpec::Smooth3Cos.build().unwrap();
    let record = match benchmark_solver(&d).refine_minimum(10005.0, 1e-2) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let de = (record.e_star - BENCH_E).abs();
    let pass = de <= 5e-9 && record.t_star <= 1e-11;
    let detail = format!(
        "E = {:.13}, |dE| = {de:.2e}, t = {:.3e}, t_s = {:.3e}, delta = {}",
        record.e_star, record.t_star, record.t_s_star, record.delta
    );
    *bench = Some(Benchmark { record });
    outcome(pass, detail)
}

fn benchmark_constants() -> BoundConstants {
    let d = DomainSpec::Smooth3Cos.build().unwrap();
    let ground = certify_ground_state(&d, &SolverConfig::default()).unwrap();
    compute_constants(&geom_constants(&d, 8192), ground).unwrap()
}

fn c5_constants(k: &BoundConstants) -> Outcome {
    outcome(
        (k.c_hf - 2.9).abs() <= 0.05 && (k.c_mp - 1.31).abs() <= 0.02,
        format!("C_hf = {:.4}, C_MP = {:.4}, E1 = {:.10}", k.c_hf, k.c_mp, k.ground.e1),
    )
}

fn within(x: f64, target: f64) -> bool {
    (x - target).abs() <= 0.1 * target
}

fn c6_radii(k: &BoundConstants, bench: &Option<Benchmark>) -> Outcome {
    let Some(b) = bench else {
        return outcome(false, "no benchmark minimum".into());
    };
    let r = &b.record;
    let opts = CertifyOptions::default();
    let cert = certify(r.e_star, r.t_star, r.t_s_star, k, &opts);
    let radius = |kind| cert.get(kind).map_or(f64::NAN, |i| i.radius);
    let (mp, hf, sharp) = (radius(BoundKind::MolerPayne), radius(BoundKind::ThmBHf), radius(BoundKind::StarSharp));
    let d = DomainSpec::Smooth3Cos.build().unwrap();
    let neighbour = match benchmark_solver(&d).refine_minimum(BENCH_NEIGHBOUR, 1e-2) {
        Ok(n) => n,
        Err(e) => return outcome(false, format!("neighbour: {e}")),
    };
    let ncert = certify(neighbour.e_star, neighbour.t_star, neighbour.t_s_star, k, &opts);
    let nr = ncert.tightest_interval().map_or(f64::INFINITY, |i| i.radius);
    let own = cert.tightest_interval().map_or(f64::INFINITY, |i| i.radius);
    let ef = match eigenfunction_error(r.e_star, r.t_star, own, neighbour.e_star, nr, k, &opts) {
        Ok(ef) => ef,
        Err(e) => return outcome(false, e.to_string()),
    };
    let pass = within(mp, 2.9e-8)
        && within(hf, 6.3e-10)
        && within(sharp, 3.5e-10)
        && within(ef.l2_error_bound, 2.7e-10)
        && within(ef.baseline_mp, 1.2e-8);
    outcome(
        pass,
        format!(
            "MP {mp:.3e}, hf {hf:.3e}, star-sharp {sharp:.3e}, eigenfunction {:.3e} vs baseline {:.3e} (E_k = {:.10})",
            ef.l2_error_bound, ef.baseline_mp, neighbour.e_star
        ),
    )
}

fn c7_pairwise() -> Outcome {
    let g = geom_constants(&disk(), 4096);
    let recs = pairwise_audit(2000.0, g.s).unwrap();
    let bad = recs.iter().filter(|r| !r.pass).count();
    outcome(bad == 0, format!("{} pairs, {bad} violations", recs.len()))
}

fn c8_window() -> Outcome {
    let ratios: Vec<(f64, f64)> =
        [250.0, 500.0, 1000.0, 2000.0, 4000.0].iter().map(|&e| (e, window_qo_check(e, 1.0).unwrap().ratio)).collect();
    let hi = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let lo = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let list: Vec<String> = ratios.iter().map(|(e, r)| format!("{e}: {r:.3}")).collect();
    outcome(hi <= 4.4 && hi / lo < 3.0, format!("ratios {}, spread {:.2}", list.join(", "), hi / lo))
}

fn c9_rellich_weyl() -> Outcome {
    let modes = disk_spectrum(400.0);
    let modes = &modes[..50];
    let q = disk_quadrature(modes.iter().map(|m| m.m).max().unwrap().max(24)).unwrap();
    let worst = modes.iter().map(|m| rellich_check(m, &q).lhs).fold(0.0, f64::max);
    let rows = weyl_check(4000.0);
    let weyl_worst = rows.iter().map(|r| r.remainder.abs() / (3.0 * r.energy.sqrt())).fold(0.0, f64::max);
    outcome(
        worst < 1e-10 && weyl_worst <= 1.0,
        format!("Rellich max deviation {worst:.2e} over 50 modes; max |R|/(3 sqrt E) = {weyl_worst:.3} over {} points", rows.len()),
    )
}

fn c10_cross_validation() -> Outcome {
    let d = disk();
    let solver = TensionSolver::new(&d, SolverConfig::default());
    let levels = disk_levels(2000.0);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut compared, mut worst) = (0, 0.0f64);
    for _ in 0..50 {
        let l = levels[rng.random_range(0..levels.len())].max(6.0);
        let e = l + 10f64.powf(rng.random_range(-5.5..-2.5)) * l.sqrt();
        let (Ok(a), Ok(b)) = (solver.tension_with(e, 0.157, Method::Gevp), solver.tension_with(e, 0.157, Method::Gsvd))
        else {
            continue;
        };
        let range = 1e-7..=1e-2;
        if range.contains(&a.t) && range.contains(&b.t) {
            compared += 1;
            worst = worst.max((a.t - b.t).abs() / a.t.min(b.t));
        }
    }
    outcome(compared > 0 && worst <= 0.1, format!("{compared} of 50 energies in range, max relative difference {worst:.2e}"))
}

fn c11_sharpness() -> Outcome {
    let d = disk();
    let solver = TensionSolver::new(&d, SolverConfig::default());
    let all = disk_levels(2100.0);
    let levels: Vec<f64> = all.iter().copied().filter(|&l| (500.0..=2000.0).contains(&l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..30 {
        let l = levels[rng.random_range(0..levels.len())];
        let e = l + 10f64.powf(rng.random_range(-4.0..-3.0)) * l.sqrt();
        let r = solver.tension_at(e).unwrap();
        let ratio = nearest(&all, e) / (e.sqrt() * r.t_s);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    outcome(lo >= 1.2 && hi <= 1.5, format!("30 energies, ratio in [{lo:.4}, {hi:.4}]"))
}

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |n: u32| selected.is_empty() || selected.contains(&n);
    let limits = [120.0, 600.0, 300.0, 300.0, f64::INFINITY, f64::INFINITY, 300.0, f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY];
    let mut bench = None;
    let mut constants = None;
    let mut failures = 0;
    for n in 1..=11u32 {
        // the radii need the benchmark minimum and constants
        let needed = run(n) || (n == 4 && run(6)) || (n == 5 && run(6));
        if !needed {
            continue;
        }
        let start = Instant::now();
        let o = match n {
            1 => c1_disk_spectrum(),
            2 => c2_soundness(),
            3 => c3_low_frequency(),
            4 => c4_high_frequency(&mut bench),
            5 => c5_constants(constants.insert(benchmark_constants())),
            6 => c6_radii(constants.get_or_insert_with(benchmark_constants), &bench),
            7 => c7_pairwise(),
            8 => c8_window(),
            9 => c9_rellich_weyl(),
            10 => c10_cross_validation(),
            _ => c11_sharpness(),
        };
        let secs = start.elapsed().as_secs_f64();
        let limit = limits[n as usize - 1];
        let pass = o.pass && secs <= limit;
        if !pass {
            failures += 1;
        }
        let budget = if limit.is_finite() { format!(" (limit {limit:.0} s)") } else { String::new() };
        println!("criterion {n:2}: {} [{secs:.1} s{budget}] {}", if pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
