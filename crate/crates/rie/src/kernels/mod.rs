//! Decoherence exponents `f_nu`, phases `phi_nu` and the phase difference
//! `phi_minus = phi_1 - phi_2` of the two-bath model.
//!
//! ```text
//! f_nu   = int_0^inf dy C(y) y coth(y/2) (1 - cos yt) w_nu(y t0)
//! phi_nu = int_0^Y   dy      y (yt - sin yt)         w_nu(y t0)
//! ```
//!
//! `C(y)` is 1 below the cutoff `Y` and, for a power-law cutoff, `y^-p`
//! above it. The cutoff function only shapes the decoherence exponents: the
//! phase integrand grows like `y^2 t`, so a power-law tail with `p <= 3` would
//! make the phases diverge, and they always use the sharp cutoff.
//!
//! Three evaluation routes exist. Direct quadrature integrates all five
//! independent integrands in one pass over panels aligned to half periods of
//! the fastest oscillator. The analytic route combines the closed forms of
//! [`closed`] with the thermal correction of [`thermal`]. The long-time route
//! drops the `cos yt` terms of `f_nu`.

pub mod closed;
pub mod tail;
pub mod thermal;

use crate::model::CutoffSpec;
use crate::quadrature::{integrate_panels, Tolerance};
use crate::specialfn::{
    dipole_anisotropy, geometric_weight, one_minus_cos, thermal_excess, x_minus_sin, y_coth_half, Bath,
    COTH_SATURATION,
};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

pub use closed::phi_minus_closed;

/// Largest `y_max * max(t, t0)` accepted by the explicit quadrature strategy.
pub const OSCILLATION_BUDGET: f64 = 1e7;

/// Largest `y_max * max(t, t0)` for which automatic selection integrates
/// numerically; the analytic route is exact (or has a documented asymptotic
/// error) beyond it and is orders of magnitude cheaper.
pub const AUTO_QUADRATURE_LIMIT: f64 = 2e4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error(
        "oscillation budget exceeded: y_max*max(t,t0) = {product:e} > {budget:e}; \
         use the ClosedFormCothOne or LongTimeAsymptote strategy"
    )]
    OscillationBudget { product: f64, budget: f64 },
    #[error("invalid kernel query: {0}")]
    InvalidQuery(String),
    #[error("inconsistent strategy and mode: {0}")]
    Configuration(String),
    #[error("power-law tail diverges for p = {0}; the exponent must exceed 2")]
    DivergentTail(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperatureMode {
    /// Full `coth(y/2)` weight.
    Thermal,
    /// `coth(y/2)` replaced by 1.
    CothOne,
    /// Zero temperature: `coth = 1`, times in units of `t0`, so `t0 = 1`.
    ZeroT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    AutoSelect,
    Quadrature,
    ClosedFormCothOne,
    LongTimeAsymptote,
}

/// Route actually taken for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelPath {
    Quadrature,
    ClosedFormCothOne,
    ThermalAnalytic,
    LongTimeAsymptote,
}

impl KernelPath {
    pub const ALL: [KernelPath; 4] = [
        KernelPath::Quadrature,
        KernelPath::ClosedFormCothOne,
        KernelPath::ThermalAnalytic,
        KernelPath::LongTimeAsymptote,
    ];

    pub fn label(self) -> &'static str {
        match self {
            KernelPath::Quadrature => "quadrature",
            KernelPath::ClosedFormCothOne => "closed_form_coth_one",
            KernelPath::ThermalAnalytic => "thermal_analytic",
            KernelPath::LongTimeAsymptote => "long_time_asymptote",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub t: f64,
    pub t0: f64,
    pub y_max: f64,
    pub cutoff: CutoffSpec,
    pub mode: TemperatureMode,
    pub strategy: Strategy,
}

impl KernelQuery {
    /// Thermal, sharp-cutoff query with automatic strategy selection.
    pub fn new(t: f64, t0: f64, y_max: f64) -> Self {
        KernelQuery {
            t,
            t0,
            y_max,
            cutoff: CutoffSpec::Sharp,
            mode: TemperatureMode::Thermal,
            strategy: Strategy::AutoSelect,
        }
    }

    pub fn with_mode(self, mode: TemperatureMode) -> Self {
        KernelQuery { mode, ..self }
    }

    pub fn with_strategy(self, strategy: Strategy) -> Self {
        KernelQuery { strategy, ..self }
    }

    pub fn with_cutoff(self, cutoff: CutoffSpec) -> Self {
        KernelQuery { cutoff, ..self }
    }

    /// `y_max * max(t, t0)`, the number of half periods times pi.
    pub fn oscillation_product(&self) -> f64 {
        self.y_max * self.t.max(self.t0)
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let bad = |what: &str, v: f64| Err(KernelError::InvalidQuery(format!("{what} = {v}")));
        if !(self.t.is_finite() && self.t >= 0.0) {
            return bad("t must be finite and >= 0, got t", self.t);
        }
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return bad("t0 must be finite and > 0, got t0", self.t0);
        }
        if !(self.y_max.is_finite() && self.y_max > 0.0) {
            return bad("y_max must be finite and > 0, got y_max", self.y_max);
        }
        if let CutoffSpec::PowerLaw { p } = self.cutoff {
            if !(p > 2.0) {
                return Err(KernelError::DivergentTail(p));
            }
            if self.y_max < 1.0 {
                return bad("a power-law cutoff needs y_max >= 1, got y_max", self.y_max);
            }
        }
        if self.mode == TemperatureMode::ZeroT && self.t0 != 1.0 {
            return bad("zero-temperature queries measure time in units of t0, so t0 must be 1, got t0", self.t0);
        }
        if self.mode == TemperatureMode::Thermal && self.strategy == Strategy::ClosedFormCothOne {
            return Err(KernelError::Configuration(
                "the ClosedFormCothOne strategy requires the CothOne or ZeroT mode".into(),
            ));
        }
        Ok(())
    }

    /// Route that [`evaluate_kernels`] takes for this query.
    pub fn resolve_path(&self) -> Result<KernelPath, KernelError> {
        self.validate()?;
        let product = self.oscillation_product();
        Ok(match self.strategy {
            Strategy::Quadrature if product > OSCILLATION_BUDGET => {
                return Err(KernelError::OscillationBudget {
                    product,
                    budget: OSCILLATION_BUDGET,
                })
            }
            Strategy::Quadrature => KernelPath::Quadrature,
            Strategy::ClosedFormCothOne => KernelPath::ClosedFormCothOne,
            Strategy::LongTimeAsymptote => KernelPath::LongTimeAsymptote,
            Strategy::AutoSelect if product <= AUTO_QUADRATURE_LIMIT => KernelPath::Quadrature,
            Strategy::AutoSelect if self.mode == TemperatureMode::Thermal => KernelPath::ThermalAnalytic,
            Strategy::AutoSelect => KernelPath::ClosedFormCothOne,
        })
    }

    fn thermal(&self) -> bool {
        self.mode == TemperatureMode::Thermal
    }
}

/// The four kernels at one `(t, t0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathKernels {
    pub f1: f64,
    pub f2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi_minus: f64,
    /// Absolute error bound on every field.
    pub error_estimate: f64,
    pub path: KernelPath,
}

impl BathKernels {
    pub fn zero(path: KernelPath) -> Self {
        BathKernels {
            f1: 0.0,
            f2: 0.0,
            phi1: 0.0,
            phi2: 0.0,
            phi_minus: 0.0,
            error_estimate: 0.0,
            path,
        }
    }

    /// Kernels with only phases, as used for phase-only evolution.
    pub fn phases(phi1: f64, phi2: f64) -> Self {
        BathKernels {
            phi1,
            phi2,
            phi_minus: phi1 - phi2,
            ..BathKernels::zero(KernelPath::ClosedFormCothOne)
        }
    }

    pub fn f(&self, nu: Bath) -> f64 {
        match nu {
            Bath::Cos => self.f1,
            Bath::Sin => self.f2,
        }
    }

    pub fn phi(&self, nu: Bath) -> f64 {
        match nu {
            Bath::Cos => self.phi1,
            Bath::Sin => self.phi2,
        }
    }
}

/// Isotropic and anisotropic pieces of the decoherence integrals.
#[derive(Debug, Clone, Copy, Default)]
struct Split {
    iso: f64,
    an: f64,
    error: f64,
}

impl Split {
    fn add(self, other: Split) -> Split {
        Split {
            iso: self.iso + other.iso,
            an: self.an + other.an,
            error: self.error + other.error,
        }
    }
}

fn power_tail_split(q: &KernelQuery) -> Split {
    let CutoffSpec::PowerLaw { p } = q.cutoff else {
        return Split::default();
    };
    Split {
        iso: tail::isotropic(q.t, q.y_max, p),
        an: tail::anisotropic(q.t, q.t0, q.y_max, p),
        error: 1e-13 * q.y_max.powf(2.0 - p),
    }
}

/// Thermal excess over the power-law region `[Y, 40]`, needed when the
/// quadrature route covers `[0, Y]` only.
fn thermal_tail_split(q: &KernelQuery) -> Split {
    let CutoffSpec::PowerLaw { p } = q.cutoff else {
        return Split::default();
    };
    if !q.thermal() || q.y_max >= COTH_SATURATION {
        return Split::default();
    }
    let (t, t0) = (q.t, q.t0);
    let f = |y: f64| {
        let w = y.powf(-p) * thermal_excess(y) * one_minus_cos(y * t);
        [w / 3.0, w * dipole_anisotropy(y * t0)]
    };
    let width = PI / t.max(t0).max(1.0);
    let r = integrate_panels(&f, q.y_max, COTH_SATURATION, width, Tolerance::default());
    Split {
        iso: r.value[0],
        an: r.value[1],
        error: r.error,
    }
}

fn assemble(f: Split, phi_iso: f64, phi_minus: f64, extra_error: f64, path: KernelPath) -> BathKernels {
    let phi1 = phi_iso + 0.5 * phi_minus;
    let phi2 = phi_iso - 0.5 * phi_minus;
    let f1 = f.iso - f.an;
    let f2 = f.iso + f.an;
    let rounding = 4.0 * f64::EPSILON * (phi_iso.abs() + phi_minus.abs() + f.iso.abs() + f.an.abs());
    BathKernels {
        f1: f1.max(0.0),
        f2: f2.max(0.0),
        phi1,
        phi2,
        phi_minus,
        error_estimate: f.error + extra_error + rounding,
        path,
    }
}

fn by_quadrature(q: &KernelQuery) -> BathKernels {
    let (t, t0, y_max) = (q.t, q.t0, q.y_max);
    let thermal = q.thermal();
    let integrand = |y: f64| {
        let yc = if thermal { y_coth_half(y) } else { y };
        let damp = yc * one_minus_cos(y * t);
        let phase = y * x_minus_sin(y * t);
        let w2 = geometric_weight(Bath::Sin, y * t0);
        let w1 = geometric_weight(Bath::Cos, y * t0);
        [damp * w1, damp * w2, phase * w1, phase * w2, phase * (w2 - 1.0 / 3.0)]
    };
    let width = PI / t.max(t0);
    let r = integrate_panels(&integrand, 0.0, y_max, width, Tolerance::default());
    let [f1, f2, phi1, phi2, phi_an] = r.value;
    let tail = power_tail_split(q).add(thermal_tail_split(q));
    let rounding = 4.0 * f64::EPSILON * (phi1.abs() + phi2.abs());
    BathKernels {
        f1: f1 + tail.iso - tail.an,
        f2: f2 + tail.iso + tail.an,
        phi1,
        phi2,
        phi_minus: -2.0 * phi_an,
        error_estimate: r.error + tail.error + rounding,
        path: KernelPath::Quadrature,
    }
}

fn analytic(q: &KernelQuery, path: KernelPath) -> BathKernels {
    let (t, t0, y_max) = (q.t, q.t0, q.y_max);
    let x = y_max * t0;
    let sharp = Split {
        iso: closed::f_isotropic(t, y_max),
        an: closed::f_anisotropic(t, t0, y_max),
        // The anisotropic closed form cancels like 1/X^2 for small Y t0, and
        // the Ci difference is lost once t/t0 exceeds 2^53.
        error: 8.0 * f64::EPSILON * (1.0 + 1.0 / (x * x).min(1.0)) * (y_max * y_max + t / (t0 * t0 * t0))
            + if t / t0 > 1e15 { 2.0 / (x * t0 * t0) } else { 0.0 },
    };
    let mut f = sharp.add(power_tail_split(q));
    if q.thermal() {
        let th = thermal::thermal_correction(t, t0, y_max, q.cutoff);
        f = f.add(Split {
            iso: th.iso,
            an: th.an,
            error: th.error,
        });
    }
    let phi_minus = phi_minus_closed(t, t0, y_max);
    assemble(
        f,
        closed::phi_isotropic(t, y_max),
        phi_minus,
        closed::phi_minus_rounding(t, t0, y_max),
        path,
    )
}

fn long_time(q: &KernelQuery) -> BathKernels {
    let (t, t0, y_max) = (q.t, q.t0, q.y_max);
    let x = y_max * t0;
    let residual = (y_max / t + 2.0 / (t * t)) / 3.0 + 1.0 / (x * t0 * t0) + 1.0 / (y_max * t0 * t0 * t0);
    let mut f = Split {
        iso: y_max * y_max / 6.0,
        an: closed::f_anisotropic_long_time(t0, y_max),
        error: residual,
    };
    if let CutoffSpec::PowerLaw { p } = q.cutoff {
        f = f.add(Split {
            iso: tail::isotropic_long_time(y_max, p),
            an: tail::anisotropic_long_time(t0, y_max, p),
            error: y_max.powf(1.0 - p) / t,
        });
    }
    if q.thermal() {
        let th = thermal::thermal_long_time(t0, y_max, q.cutoff);
        f = f.add(Split {
            iso: th.iso,
            an: th.an,
            error: th.error + 3.0 / (t * t),
        });
    }
    let phi_minus = phi_minus_closed(t, t0, y_max);
    assemble(
        f,
        closed::phi_isotropic(t, y_max),
        phi_minus,
        closed::phi_minus_rounding(t, t0, y_max),
        KernelPath::LongTimeAsymptote,
    )
}

/// Evaluate all kernels for one query.
pub fn evaluate_kernels(q: &KernelQuery) -> Result<BathKernels, KernelError> {
    let path = q.resolve_path()?;
    if q.t == 0.0 {
        return Ok(BathKernels::zero(path));
    }
    Ok(match path {
        KernelPath::Quadrature => by_quadrature(q),
        KernelPath::ClosedFormCothOne | KernelPath::ThermalAnalytic => analytic(q, path),
        KernelPath::LongTimeAsymptote => long_time(q),
    })
}

/// Decoherence exponent `f_nu`.
pub fn f_nu(q: &KernelQuery, nu: Bath) -> Result<f64, KernelError> {
    evaluate_kernels(q).map(|k| k.f(nu))
}

/// Phase `phi_nu`.
pub fn phi_nu(q: &KernelQuery, nu: Bath) -> Result<f64, KernelError> {
    evaluate_kernels(q).map(|k| k.phi(nu))
}

/// Closed form of `f_nu` for `coth = 1` and a sharp cutoff.
pub fn f_nu_closed_coth_one(t: f64, t0: f64, y_max: f64, nu: Bath) -> f64 {
    closed::f_nu_closed_coth_one(t, t0, y_max, nu.sign())
}

/// Time-independent upper bound on the contribution of the cutoff region
/// `y > y_max` to `f_nu`, `(2/3) int_Y^inf C(y) y dy`.
pub fn cutoff_tail_bound(y_max: f64, cutoff: CutoffSpec) -> Result<f64, KernelError> {
    match cutoff {
        CutoffSpec::Sharp => Ok(0.0),
        CutoffSpec::PowerLaw { p } if p > 2.0 => Ok(2.0 / 3.0 * y_max.powf(2.0 - p) / (p - 2.0)),
        CutoffSpec::PowerLaw { p } => Err(KernelError::DivergentTail(p)),
    }
}
