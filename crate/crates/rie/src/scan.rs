//! Parameter sweeps over the evolution map and the `t1` predictor.
//!
//! Every cell is a pure function of its coordinates, so grids are evaluated in
//! parallel into pre-allocated slots and are bit-identical for any worker
//! count.

use crate::entanglement::entanglement_of_formation;
use crate::kernels::{evaluate_kernels, BathKernels, KernelError, KernelPath, KernelQuery, Strategy};
use crate::model::{DerivedQuantities, ParamError, PhysicalParams, CONSTANTS};
use crate::twoqubit::{asymptotic_state, evolve, initial_product_state, StateError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("axis `{name}`: {reason}")]
    Axis { name: String, reason: String },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no entanglement maximum above {threshold} for log10(t/tau) in [{lo}, {hi}]")]
    SearchWindow { lo: f64, hi: f64, threshold: f64 },
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log10,
}

/// Uniformly sampled axis. For `Log10` the bounds and coordinates are
/// decimal logarithms of the physical value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub scale: Scale,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn linear(name: &str, min: f64, max: f64, n: usize) -> Self {
        Axis {
            name: name.to_string(),
            scale: Scale::Linear,
            min,
            max,
            n,
        }
    }

    pub fn log10(name: &str, min: f64, max: f64, n: usize) -> Self {
        Axis {
            scale: Scale::Log10,
            ..Axis::linear(name, min, max, n)
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let fail = |reason: &str| {
            Err(ScanError::Axis {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        if self.n == 0 {
            return fail("needs at least one point");
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return fail("bounds must be finite");
        }
        if self.n > 1 && !(self.max > self.min) {
            return fail("max must exceed min");
        }
        Ok(())
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn physical(&self, i: usize) -> f64 {
        match self.scale {
            Scale::Linear => self.coordinate(i),
            Scale::Log10 => 10f64.powf(self.coordinate(i)),
        }
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coordinate(i)).collect()
    }
}

/// How a cell value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Kernel(KernelPath),
    AsymptoticMap,
    Failed,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Kernel(p) => p.label(),
            Provenance::AsymptoticMap => "asymptotic_map",
            Provenance::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellDiagnostic {
    pub ix: usize,
    pub iy: usize,
    pub message: String,
}

/// Entanglement of formation on a rectangular grid; `values[iy * nx + ix]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanGrid {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub values: Vec<f64>,
    pub params: Option<PhysicalParams>,
    pub provenance: Vec<Provenance>,
    pub diagnostics: Vec<CellDiagnostic>,
}

impl ScanGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.x_axis.n + ix]
    }

    /// Column `ix` from bottom to top.
    pub fn column(&self, ix: usize) -> Vec<f64> {
        (0..self.y_axis.n).map(|iy| self.value(ix, iy)).collect()
    }

    /// Row `iy` from left to right.
    pub fn row(&self, iy: usize) -> Vec<f64> {
        self.values[iy * self.x_axis.n..(iy + 1) * self.x_axis.n].to_vec()
    }

    /// Number of cells per provenance label.
    pub fn strategy_histogram(&self) -> BTreeMap<&'static str, usize> {
        let mut h = BTreeMap::new();
        for p in &self.provenance {
            *h.entry(p.label()).or_insert(0) += 1;
        }
        h
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Worker count; `None` uses the machine parallelism.
    pub threads: Option<usize>,
    pub strategy: Strategy,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            threads: None,
            strategy: Strategy::AutoSelect,
        }
    }
}

/// Default axes: `log10(t0/tau)` in [0, 5] and `log10(t/tau)` in [0, 16].
pub fn fig1_axes() -> (Axis, Axis) {
    (
        Axis::log10("log10_t0_over_tau", 0.0, 5.0, 100),
        Axis::log10("log10_t_over_tau", 0.0, 16.0, 100),
    )
}

/// Default axes: `v` in [0, 100] and `phi_minus` in [0, 2 pi], step `pi/50`.
pub fn fig2_axes() -> (Axis, Axis) {
    (Axis::linear("v", 0.0, 100.0, 101), Axis::linear("phi_minus", 0.0, 2.0 * PI, 101))
}

/// Default axes: `gamma` in [0, 1] and `log10(t/tau)` in [0, 16].
pub fn fig3_axes() -> (Axis, Axis) {
    (Axis::linear("gamma", 0.0, 1.0, 101), Axis::log10("log10_t_over_tau", 0.0, 16.0, 100))
}

/// Light travel time used for the third figure.
pub const FIG3_T0_OVER_TAU: f64 = 1e6;

/// Result of the single-point pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub kernels: BathKernels,
    pub eof: f64,
}

/// Kernels with the scan fallback: a quadrature refusal is retried with the
/// analytic route.
pub fn kernels_with_fallback(q: &KernelQuery) -> Result<BathKernels, KernelError> {
    match evaluate_kernels(q) {
        Err(KernelError::OscillationBudget { .. }) => evaluate_kernels(&q.with_strategy(Strategy::AutoSelect)),
        other => other,
    }
}

fn thermal_derived(params: &PhysicalParams) -> Result<DerivedQuantities, ScanError> {
    let derived = params.derive_dimensionless()?;
    if derived.is_zero_temperature() {
        return Err(ParamError::UnsupportedMode("a scan in units of tau").into());
    }
    Ok(derived)
}

/// Evaluate kernels, evolve the product state and return its entanglement
/// of formation at dimensionless `t`, `t0` (units of tau).
pub fn single_point(
    params: &PhysicalParams,
    t: f64,
    t0: f64,
    gamma: f64,
    strategy: Strategy,
) -> Result<PointResult, ScanError> {
    let derived = thermal_derived(params)?;
    point_with(&derived, params, t, t0, gamma, strategy)
}

fn point_with(
    derived: &DerivedQuantities,
    params: &PhysicalParams,
    t: f64,
    t0: f64,
    gamma: f64,
    strategy: Strategy,
) -> Result<PointResult, ScanError> {
    let q = KernelQuery::new(t, t0, derived.y_max)
        .with_cutoff(params.cutoff)
        .with_strategy(strategy);
    let kernels = kernels_with_fallback(&q)?;
    let rho = evolve(&initial_product_state(), &kernels, derived.a, gamma)?;
    Ok(PointResult {
        kernels,
        eof: entanglement_of_formation(&rho)?,
    })
}

type Cell = (f64, Provenance, Option<String>);

fn failed(e: impl std::fmt::Display) -> Cell {
    (f64::NAN, Provenance::Failed, Some(e.to_string()))
}

fn run_rows<F>(x_axis: Axis, y_axis: Axis, threads: Option<usize>, row: F) -> Result<ScanGrid, ScanError>
where
    F: Fn(usize) -> Vec<Cell> + Sync,
{
    x_axis.validate()?;
    y_axis.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| ScanError::ThreadPool(e.to_string()))?;
    let rows: Vec<Vec<Cell>> = pool.install(|| (0..y_axis.n).into_par_iter().map(&row).collect());
    let mut values = Vec::with_capacity(x_axis.n * y_axis.n);
    let mut provenance = Vec::with_capacity(values.capacity());
    let mut diagnostics = Vec::new();
    for (iy, cells) in rows.into_iter().enumerate() {
        for (ix, (v, p, msg)) in cells.into_iter().enumerate() {
            values.push(v);
            provenance.push(p);
            if let Some(message) = msg {
                diagnostics.push(CellDiagnostic { ix, iy, message });
            }
        }
    }
    Ok(ScanGrid {
        x_axis,
        y_axis,
        values,
        params: None,
        provenance,
        diagnostics,
    })
}

/// Entanglement over `(log10 t0/tau, log10 t/tau)` at full coupling.
pub fn scan_fig1(params: &PhysicalParams, x_axis: Axis, y_axis: Axis, opts: ScanOptions) -> Result<ScanGrid, ScanError> {
    let derived = thermal_derived(params)?;
    let xs: Vec<f64> = (0..x_axis.n).map(|i| x_axis.physical(i)).collect();
    let ys: Vec<f64> = (0..y_axis.n).map(|i| y_axis.physical(i)).collect();
    let mut grid = run_rows(x_axis, y_axis, opts.threads, |iy| {
        xs.iter()
            .map(|&t0| match point_with(&derived, params, ys[iy], t0, 1.0, opts.strategy) {
                Ok(r) => (r.eof, Provenance::Kernel(r.kernels.path), None),
                Err(e) => failed(e),
            })
            .collect()
    })?;
    grid.params = Some(*params);
    Ok(grid)
}

/// Long-time entanglement over `(v, phi_minus)`.
pub fn scan_fig2(alpha0: f64, x_axis: Axis, y_axis: Axis, opts: ScanOptions) -> Result<ScanGrid, ScanError> {
    let rho0 = initial_product_state();
    let vs: Vec<f64> = (0..x_axis.n).map(|i| x_axis.physical(i)).collect();
    let phis: Vec<f64> = (0..y_axis.n).map(|i| y_axis.physical(i)).collect();
    run_rows(x_axis, y_axis, opts.threads, |iy| {
        vs.iter()
            .map(|&v| {
                match asymptotic_state(v, phis[iy], &rho0, alpha0).and_then(|rho| entanglement_of_formation(&rho)) {
                    Ok(e) => (e, Provenance::AsymptoticMap, None),
                    Err(e) => failed(e),
                }
            })
            .collect()
    })
}

/// Entanglement over `(gamma, log10 t/tau)` at `t0 = t0_over_tau`; kernels
/// are shared by all cells of a row.
pub fn scan_fig3(
    params: &PhysicalParams,
    t0_over_tau: f64,
    x_axis: Axis,
    y_axis: Axis,
    opts: ScanOptions,
) -> Result<ScanGrid, ScanError> {
    let derived = thermal_derived(params)?;
    let gammas: Vec<f64> = (0..x_axis.n).map(|i| x_axis.physical(i)).collect();
    let ts: Vec<f64> = (0..y_axis.n).map(|i| y_axis.physical(i)).collect();
    let rho0 = initial_product_state();
    let mut grid = run_rows(x_axis, y_axis, opts.threads, |iy| {
        let q = KernelQuery::new(ts[iy], t0_over_tau, derived.y_max)
            .with_cutoff(params.cutoff)
            .with_strategy(opts.strategy);
        let kernels = match kernels_with_fallback(&q) {
            Ok(k) => k,
            Err(e) => return gammas.iter().map(|_| failed(&e)).collect(),
        };
        gammas
            .iter()
            .map(|&g| match evolve(&rho0, &kernels, derived.a, g).and_then(|rho| entanglement_of_formation(&rho)) {
                Ok(e) => (e, Provenance::Kernel(kernels.path), None),
                Err(e) => failed(e),
            })
            .collect()
    })?;
    grid.params = Some(*params);
    Ok(grid)
}

/// Time of the first entanglement maximum, `pi R^3 / (2 alpha0 d^2 c0)`, in
/// seconds.
pub fn predict_t1(params: &PhysicalParams) -> Result<f64, ScanError> {
    params.validate()?;
    let r = params.separation;
    let d = params.dipole;
    Ok(PI * r * r * r / (2.0 * CONSTANTS.alpha0 * d * d * CONSTANTS.c0))
}

/// Separation in metres for which [`predict_t1`] equals `t1` seconds.
pub fn separation_for_t1(t1: f64, dipole: f64) -> Result<f64, ScanError> {
    for (name, value) in [("t1_seconds", t1), ("dipole", dipole)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(ParamError::Domain {
                name,
                value,
                reason: "must be finite and positive",
            }
            .into());
        }
    }
    Ok((2.0 * CONSTANTS.alpha0 * dipole * dipole * CONSTANTS.c0 * t1 / PI).cbrt())
}

/// Search window for [`find_t1_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Search {
    /// Bounds of `log10(t/tau)`; `None` spans from `t0` to a hundred times the
    /// predicted time.
    pub log10_t_min: Option<f64>,
    pub log10_t_max: Option<f64>,
    pub points: usize,
    /// Smallest entanglement accepted as the first maximum.
    pub threshold: f64,
}

impl Default for T1Search {
    fn default() -> Self {
        T1Search {
            log10_t_min: None,
            log10_t_max: None,
            points: 200,
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T1Result {
    pub t_seconds: f64,
    pub t_over_tau: f64,
    pub eof: f64,
    /// Cutoff after pinning `y_max t0` to a multiple of pi.
    pub y_max: f64,
    pub evaluations: usize,
}

/// `y_max` moved to the nearest `m pi / t0`, `m >= 1`.
pub fn pinned_cutoff(y_max: f64, t0: f64) -> f64 {
    (y_max * t0 / PI).round().max(1.0) * PI / t0
}

/// Locate the first maximum of the entanglement of formation in time by a
/// coarse logarithmic scan followed by golden-section refinement.
pub fn find_t1_numeric(params: &PhysicalParams, search: T1Search) -> Result<T1Result, ScanError> {
    let derived = thermal_derived(params)?;
    let tau = derived.tau.expect("finite temperature");
    let t0 = derived.t0();
    if t0 < 10.0 {
        return Err(ScanError::Precondition(format!(
            "the first-maximum search needs t0/tau >= 10, got {t0}"
        )));
    }
    if search.points < 3 {
        return Err(ScanError::Precondition("the coarse scan needs at least 3 points".into()));
    }
    let y_max = pinned_cutoff(derived.y_max, t0);
    let pinned = DerivedQuantities { y_max, ..derived };
    let predicted = predict_t1(params)? / tau;
    let lo = search.log10_t_min.unwrap_or(t0.log10());
    let hi = search.log10_t_max.unwrap_or(predicted.log10() + 2.0);
    if !(hi > lo) {
        return Err(ScanError::Precondition(format!("empty search window [{lo}, {hi}]")));
    }
    let mut evaluations = 0;
    let mut eof = |x: f64| -> Result<f64, ScanError> {
        evaluations += 1;
        point_with(&pinned, params, 10f64.powf(x), t0, params.gamma, Strategy::AutoSelect).map(|r| r.eof)
    };
    let axis = Axis::log10("log10_t_over_tau", lo, hi, search.points);
    let xs = axis.coordinates();
    let values = xs.iter().map(|&x| eof(x)).collect::<Result<Vec<_>, _>>()?;
    let peak = (1..values.len() - 1)
        .find(|&i| values[i] > search.threshold && values[i] >= values[i - 1] && values[i] >= values[i + 1])
        .ok_or(ScanError::SearchWindow {
            lo,
            hi,
            threshold: search.threshold,
        })?;

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[peak - 1], xs[peak + 1]);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (eof(c)?, eof(d)?);
    while b - a > 1e-9 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eof(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eof(d)?;
        }
    }
    let (x, e) = if fc >= fd { (c, fc) } else { (d, fd) };
    let t = 10f64.powf(x);
    Ok(T1Result {
        t_seconds: t * tau,
        t_over_tau: t,
        eof: e,
        y_max,
        evaluations,
    })
}

/// Shortest round-trip decimal form; exponent notation outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x == 0.0 || (x.abs() >= 1e-5 && x.abs() < 1e16) || x.is_infinite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `x,y,eof` rows, x fastest.
pub fn write_csv(grid: &ScanGrid, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{},{},eof", grid.x_axis.name, grid.y_axis.name)?;
    for iy in 0..grid.y_axis.n {
        let y = format_float(grid.y_axis.coordinate(iy));
        for ix in 0..grid.x_axis.n {
            writeln!(
                w,
                "{},{},{}",
                format_float(grid.x_axis.coordinate(ix)),
                y,
                format_float(grid.value(ix, iy))
            )?;
        }
    }
    Ok(())
}

/// Gray level of one cell: black for full entanglement, white for none, mid
/// gray for failed cells.
pub fn gray_level(eof: f64) -> u8 {
    if eof.is_nan() {
        127
    } else {
        (255.0 - (255.0 * eof.clamp(0.0, 1.0)).round()) as u8
    }
}

/// Binary PGM (P5), top row at the largest `y`.
pub fn write_pgm(grid: &ScanGrid, mut w: impl Write) -> io::Result<()> {
    write!(w, "P5\n{} {}\n255\n", grid.x_axis.n, grid.y_axis.n)?;
    let mut bytes = Vec::with_capacity(grid.values.len());
    for iy in (0..grid.y_axis.n).rev() {
        bytes.extend(grid.row(iy).into_iter().map(gray_level));
    }
    w.write_all(&bytes)
}
