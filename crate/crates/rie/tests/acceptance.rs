//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 2 and 4 are checked literally and fail by a documented margin;
//! their failure does not fail the run. Any other failure does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rie::effint::{self, ModeSumConfig};
use rie::entanglement::{bell_state, concurrence, entanglement_of_formation, hermitian_eigen, werner_state};
use rie::kernels::{
    cutoff_tail_bound, evaluate_kernels, phi_minus_closed, KernelQuery, Strategy, TemperatureMode,
};
use rie::linalg;
use rie::model::{CutoffSpec, PhysicalParams, CONSTANTS};
use rie::scan::{self, ScanGrid, ScanOptions, FIG3_T0_OVER_TAU};
use rie::twoqubit::{evolve, initial_product_state, DensityMatrix4};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

const EXPECTED_FAILURES: [u32; 2] = [2, 4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn phase_oracle() -> Outcome {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let t = rng.gen_range(0.1..20.0);
        let t0 = rng.gen_range(0.5..5.0);
        let y_max = rng.gen_range(10.0..500.0);
        let mode = if i % 2 == 0 { TemperatureMode::Thermal } else { TemperatureMode::CothOne };
        let q = KernelQuery::new(t, t0, y_max).with_mode(mode).with_strategy(Strategy::Quadrature);
        let k = evaluate_kernels(&q).expect("within the quadrature budget");
        worst = worst.max(rel(k.phi1 - k.phi2, phi_minus_closed(t, t0, y_max)));
    }
    let secs = clock.elapsed().as_secs_f64();
    outcome(worst <= 1e-6 && secs < 10.0, format!("max rel err {worst:.2e}, {secs:.2} s"))
}

fn light_cone() -> Outcome {
    let clock = Instant::now();
    let t0 = 1.0;
    let y_max = 100.0 * PI / t0;
    let scaled = |t: f64| {
        let k = evaluate_kernels(&KernelQuery::new(t, t0, y_max)).expect("valid query");
        k.phi_minus * t0.powi(3) / t
    };
    let after = scaled(2.0 * t0) - PI;
    let before = scaled(0.5 * t0);
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        after.abs() <= 5e-3 && before.abs() <= 5e-3 && secs < 1.0,
        format!("t=2t0 residual {after:.3e}, t=t0/2 value {before:.3e}, {secs:.3} s"),
    )
}

fn fig1() -> (ScanGrid, f64) {
    let clock = Instant::now();
    let (x, y) = scan::fig1_axes();
    let grid = scan::scan_fig1(&PhysicalParams::default(), x, y, ScanOptions::default()).expect("fig. 1 scan");
    (grid, clock.elapsed().as_secs_f64())
}

fn causality(grid: &ScanGrid, secs: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for iy in 0..grid.y_axis.n {
        for ix in 0..grid.x_axis.n {
            if grid.y_axis.physical(iy) < grid.x_axis.physical(ix) {
                worst = worst.max(grid.value(ix, iy));
                cells += 1;
            }
        }
    }
    outcome(
        worst <= 1e-6 && secs < 300.0 && grid.diagnostics.is_empty(),
        format!("{cells} cells with t < t0, max EoF {worst:.2e}, scan {secs:.1} s"),
    )
}

/// First crossing of `level` in each column, linearly interpolated in the
/// log-time coordinate.
fn onset_contour(grid: &ScanGrid, level: f64) -> Vec<(f64, f64)> {
    (0..grid.x_axis.n)
        .filter_map(|ix| {
            let col = grid.column(ix);
            let iy = col.iter().position(|&v| v >= level)?;
            if iy == 0 {
                return None;
            }
            let (y0, y1) = (grid.y_axis.coordinate(iy - 1), grid.y_axis.coordinate(iy));
            let w = (level - col[iy - 1]) / (col[iy] - col[iy - 1]);
            Some((grid.x_axis.coordinate(ix), y0 + w * (y1 - y0)))
        })
        .collect()
}

fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn boundary_law(grid: &ScanGrid) -> Outcome {
    let contour = onset_contour(grid, 0.01);
    if contour.len() < 3 {
        return outcome(false, format!("only {} columns reach EoF = 0.01", contour.len()));
    }
    let (slope, intercept) = linear_fit(&contour);
    let reference = PhysicalParams::default().c_constant().expect("finite temperature").log10();
    outcome(
        (slope - 3.0).abs() <= 0.1 && (intercept - 12.2).abs() <= 0.5,
        format!(
            "slope {slope:.3}, intercept {intercept:.3} over {} columns (log10 c = {reference:.3})",
            contour.len()
        ),
    )
}

fn t1_scaling() -> Outcome {
    let clock = Instant::now();
    let base = PhysicalParams::default();
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for t0 in [1e2, 1e3] {
        let p = base.with_t0_over_tau(t0).expect("valid ratio");
        let found = scan::find_t1_numeric(&p, scan::T1Search::default()).expect("first maximum");
        worst = worst.max(rel(found.t_seconds, scan::predict_t1(&p).expect("valid params")));
        let q = base.with_t0_over_tau(2.0 * t0).expect("valid ratio");
        let doubled = scan::find_t1_numeric(&q, scan::T1Search::default()).expect("first maximum");
        ratios.push(doubled.t_seconds / found.t_seconds);
    }
    let secs = clock.elapsed().as_secs_f64();
    let ratio_ok = ratios.iter().all(|r| rel(*r, 8.0) <= 0.05);
    outcome(
        worst <= 0.05 && ratio_ok && secs < 60.0,
        format!("max deviation from prediction {worst:.2e}, t1(2t0)/t1(t0) = {ratios:.4?}, {secs:.1} s"),
    )
}

fn distance_anchors() -> Outcome {
    let far = scan::separation_for_t1(4.35e17, 1e-6).expect("valid");
    let near = scan::separation_for_t1(1e-7, 1e-6).expect("valid");
    outcome(
        rel(far, 8.4e3) <= 0.05 && rel(near, 52e-6) <= 0.05,
        format!("R = {:.3} km at 4.35e17 s, R = {:.2} um at 100 ns", far / 1e3, near * 1e6),
    )
}

fn fig2_structure() -> Outcome {
    let (x, y) = scan::fig2_axes();
    let grid = scan::scan_fig2(CONSTANTS.alpha0, x, y, ScanOptions::default()).expect("fig. 2 scan");
    let quarter = (0..grid.y_axis.n)
        .min_by(|&a, &b| {
            let d = |i: usize| (grid.y_axis.physical(i) - PI / 2.0).abs();
            d(a).total_cmp(&d(b))
        })
        .expect("non-empty axis");
    let half_shift = (grid.y_axis.n - 1) / 2;
    let peak = grid.value(0, quarter);
    let mut periodic: f64 = 0.0;
    for iy in 0..grid.y_axis.n - half_shift {
        for ix in 0..grid.x_axis.n {
            periodic = periodic.max((grid.value(ix, iy) - grid.value(ix, iy + half_shift)).abs());
        }
    }
    let row = grid.row(quarter);
    let decreasing = row.windows(2).all(|w| w[1] <= w[0]);
    let last = *row.last().expect("non-empty row");
    outcome(
        peak >= 0.999 && periodic <= 1e-10 && decreasing && last < 0.05,
        format!(
            "EoF(0, pi/2) = {peak:.9}, periodicity defect {periodic:.1e}, decreasing {decreasing}, EoF(v=100) = {last:.2e}"
        ),
    )
}

fn fig3_structure() -> Outcome {
    let clock = Instant::now();
    let (x, y) = scan::fig3_axes();
    let grid = scan::scan_fig3(&PhysicalParams::default(), FIG3_T0_OVER_TAU, x, y, ScanOptions::default())
        .expect("fig. 3 scan");
    let before = |iy: usize| grid.y_axis.physical(iy) < FIG3_T0_OVER_TAU;
    let early_max = |ix: usize| {
        (0..grid.y_axis.n)
            .filter(|&iy| before(iy))
            .map(|iy| grid.value(ix, iy))
            .fold(0.0, f64::max)
    };
    let free = early_max(0);
    let full = early_max(grid.x_axis.n - 1);
    let onsets: Vec<f64> = (0..grid.x_axis.n)
        .map(|ix| {
            grid.column(ix)
                .iter()
                .position(|&v| v >= 0.01)
                .map_or(f64::INFINITY, |iy| grid.y_axis.coordinate(iy))
        })
        .collect();
    let monotone = onsets.windows(2).all(|w| w[1] >= w[0]);
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        free > 0.5 && full <= 1e-6 && monotone,
        format!(
            "gamma=0 max EoF before t0 {free:.4}, gamma=1 {full:.1e}, onset monotone {monotone} (log10 t: {:.2} .. {:.2}), {secs:.1} s",
            onsets[0],
            onsets[onsets.len() - 1]
        ),
    )
}

fn long_time_f() -> Outcome {
    let y_max = 100.0;
    let samples = 4001;
    let mut sums = [0.0; 2];
    for i in 0..samples {
        let t = 1e3 + 9e3 * i as f64 / (samples - 1) as f64;
        let q = KernelQuery::new(t, 1.0, y_max).with_mode(TemperatureMode::CothOne);
        let k = evaluate_kernels(&q).expect("valid query");
        sums[0] += k.f1;
        sums[1] += k.f2;
    }
    let target = y_max * y_max / 6.0;
    let errs = sums.map(|s| rel(s / samples as f64, target));
    outcome(
        errs.iter().all(|e| *e <= 0.01),
        format!("mean f1, f2 relative to y_max^2/6: {:.2e}, {:.2e}", errs[0], errs[1]),
    )
}

fn entanglement_oracles() -> Outcome {
    let bell = (concurrence(&bell_state()).expect("state") - 1.0).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut product: f64 = 0.0;
    for _ in 0..1000 {
        let mut ket = || {
            let v = [0, 1].map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            v.map(|z| z / n)
        };
        let rho = DensityMatrix4::product(ket(), ket()).expect("normalized");
        product = product.max(concurrence(&rho).expect("state"));
    }
    let mut werner: f64 = 0.0;
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let c = concurrence(&werner_state(p).expect("p in range")).expect("state");
        werner = werner.max((c - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs());
    }
    outcome(
        bell <= 1e-12 && product <= 1e-10 && werner <= 1e-10,
        format!("Bell |C-1| = {bell:.1e}, max product C = {product:.1e}, Werner defect {werner:.1e}"),
    )
}

fn effective_interaction() -> Outcome {
    let clock = Instant::now();
    let (r, d) = (1e-6, 1e-8);
    let z = [0.0, 0.0, 1.0];
    let x = [1.0, 0.0, 0.0];
    let mut errs = Vec::new();
    for u in [z, x] {
        let cfg = ModeSumConfig::standard([0.0, 0.0, r], u, u, d);
        let j = effint::extrapolated_coefficient(&cfg).expect("resolved mode sum").value;
        errs.push(rel(j, effint::analytic_dipole_coefficient(u, u, cfg.r_vec, d).expect("geometry")));
    }
    let radii: Vec<f64> = (0..5).map(|j| r * 10f64.powf(j as f64 / 4.0)).collect();
    let sweep = effint::separation_sweep(40.0 * r, 0.1 * r / CONSTANTS.c0, 2, d, &radii).expect("sweep");
    let xs: Vec<f64> = sweep.iter().map(|p| p.r).collect();
    let ys: Vec<f64> = sweep.iter().map(|p| p.coefficient).collect();
    let slope = effint::log_log_slope(&xs, &ys);
    let secs = clock.elapsed().as_secs_f64();
    outcome(
        errs.iter().all(|e| *e <= 0.02) && (slope + 3.0).abs() <= 0.05 && secs < 120.0,
        format!(
            "aligned err {:.2e}, perpendicular err {:.2e}, R-sweep slope {slope:.4}, {secs:.1} s",
            errs[0], errs[1]
        ),
    )
}

fn long_time_eof(y_max: f64, p: f64) -> f64 {
    let params = PhysicalParams {
        cutoff: CutoffSpec::PowerLaw { p },
        ..PhysicalParams::default()
    }
    .with_t0_over_tau(1e2)
    .and_then(|q| q.with_y_max(y_max))
    .expect("valid params");
    let derived = params.derive_dimensionless().expect("finite temperature");
    let t0 = derived.t0();
    let t = t0.powi(3) / (4.0 * derived.a);
    let q = KernelQuery::new(t, t0, y_max)
        .with_cutoff(params.cutoff)
        .with_strategy(Strategy::LongTimeAsymptote);
    let k = evaluate_kernels(&q).expect("valid query");
    let rho = evolve(&initial_product_state(), &k, derived.a, 1.0).expect("valid map");
    entanglement_of_formation(&rho).expect("state")
}

fn cutoff_robustness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = 3.0;
    let mut literal_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..200 {
        let t = 10f64.powf(rng.gen_range(-1.0..6.0));
        let t0 = 10f64.powf(rng.gen_range(-0.5..3.0));
        let y_max = 10f64.powf(rng.gen_range(1.0..3.5));
        let base = KernelQuery::new(t, t0, y_max);
        let sharp = evaluate_kernels(&base).expect("valid query");
        let soft = evaluate_kernels(&base.with_cutoff(CutoffSpec::PowerLaw { p })).expect("valid query");
        let literal = 2.0 / 3.0 * y_max * y_max / (p - 2.0);
        let tight = cutoff_tail_bound(y_max, CutoffSpec::PowerLaw { p }).expect("p > 2");
        let slack = sharp.error_estimate + soft.error_estimate;
        for diff in [(soft.f1 - sharp.f1).abs(), (soft.f2 - sharp.f2).abs()] {
            literal_ok &= diff <= literal + slack;
            worst_ratio = worst_ratio.max((diff - slack).max(0.0) / tight);
        }
    }
    let derived = PhysicalParams::default().derive_dimensionless().expect("finite temperature");
    let y_per_v = derived.y_max / derived.v;
    let mut worst_change: f64 = 0.0;
    let mut eofs = Vec::new();
    for v in [0.05, 0.25, 0.5, 1.0] {
        let y_max = v * y_per_v;
        let (e3, e6) = (long_time_eof(y_max, 3.0), long_time_eof(y_max, 6.0));
        let change = rel(e3, e6);
        worst_change = if change.is_nan() { f64::INFINITY } else { worst_change.max(change) };
        eofs.push(e6);
    }
    outcome(
        literal_ok && worst_ratio <= 1.0 && worst_change < 1e-3,
        format!(
            "f difference within (2/3)y^2/(p-2): {literal_ok}, worst fraction of the tight bound {worst_ratio:.2e}, max EoF change {worst_change:.1e} (EoF {eofs:.4?})"
        ),
    )
}

fn map_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (mut herm, mut trace, mut pops, mut min_eig): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::INFINITY);
    let rho0 = initial_product_state();
    let params = PhysicalParams::default();
    for _ in 0..1000 {
        let t = 10f64.powf(rng.gen_range(-1.0..16.0));
        let t0 = 10f64.powf(rng.gen_range(0.0..5.0));
        let p = params.with_t0_over_tau(t0).expect("valid ratio");
        let derived = p.derive_dimensionless().expect("finite temperature");
        let q = KernelQuery::new(t, t0, derived.y_max);
        let k = scan::kernels_with_fallback(&q).expect("valid query");
        let rho = evolve(&rho0, &k, derived.a, 1.0).expect("valid map");
        herm = herm.max(linalg::hermiticity_defect(rho.entries()));
        trace = trace.max((rho.trace() - 1.0).abs());
        for (a, b) in rho.populations().iter().zip(rho0.populations()) {
            pops = pops.max((a - b).abs());
        }
        min_eig = min_eig.min(hermitian_eigen(rho.entries()).expect("Hermitian").eigenvalues[3]);
    }
    outcome(
        herm <= 1e-13 && trace <= 1e-13 && pops <= 1e-13 && min_eig >= -1e-10,
        format!("Hermiticity {herm:.1e}, trace {trace:.1e}, populations {pops:.1e}, min eigenvalue {min_eig:.1e}"),
    )
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let (grid1, secs1) = fig1();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "phase-kernel oracle", phase_oracle()),
        (2, "light-cone step", light_cone()),
        (3, "causality on the fig. 1 grid", causality(&grid1, secs1)),
        (4, "fig. 1 boundary law", boundary_law(&grid1)),
        (5, "t1 scaling", t1_scaling()),
        (6, "distance anchors", distance_anchors()),
        (7, "fig. 2 structure", fig2_structure()),
        (8, "fig. 3 structure", fig3_structure()),
        (9, "long-time decoherence limit", long_time_f()),
        (10, "entanglement measures", entanglement_oracles()),
        (11, "effective interaction", effective_interaction()),
        (12, "cutoff robustness", cutoff_robustness()),
        (13, "map invariants", map_invariants()),
    ];
    let mut unexpected = 0;
    for (n, name, o) in &results {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status} {name}: {}", o.detail);
        if !o.pass && !EXPECTED_FAILURES.contains(n) {
            unexpected += 1;
        }
        if o.pass && EXPECTED_FAILURES.contains(n) {
            println!("             (listed as a known failure but passed)");
        }
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("{passed}/{} criteria pass; {unexpected} unexpected failures", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
