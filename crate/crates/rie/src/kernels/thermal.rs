//! Thermal part of the decoherence integrals.
//!
//! Writing `y coth(y/2) = y + h(y)` with `h(y) = 2y/(e^y - 1)`, the thermal
//! excess only involves `y <= 40`. For the isotropic part with `Y >= 40`
//!
//! ```text
//! (1/3) int_0^inf h(y) (1 - cos yt) dy = (2/3) [pi^2/6 - 1/(2t^2) + pi^2/(2 sinh^2(pi t))]
//! ```
//!
//! and for `t0 >> 1` the anisotropic part tends to
//! `-(pi/(2 t0)) min(t/t0, 1)^2`, which follows from
//! `int_0^inf (1 - cos sx) g(x) dx = -(pi/4) min(s, 1)^2` and `h(0) = 2`.
//! Other regimes use quadrature, dropping `cos yt` once `t` is large.

use crate::model::CutoffSpec;
use crate::quadrature::{integrate_panels, Tolerance};
use crate::specialfn::{dipole_anisotropy, one_minus_cos, thermal_excess, COTH_SATURATION};
use std::f64::consts::PI;

/// Highest oscillation frequency integrated numerically here.
const FREQ_LIMIT: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParts {
    pub iso: f64,
    pub an: f64,
    pub error: f64,
}

/// Integration ranges with their cutoff weight exponent.
fn ranges(y_max: f64, cutoff: CutoffSpec) -> Vec<(f64, f64, Option<f64>)> {
    let mut out = vec![(0.0, y_max.min(COTH_SATURATION), None)];
    if let CutoffSpec::PowerLaw { p } = cutoff {
        if y_max < COTH_SATURATION {
            out.push((y_max, COTH_SATURATION, Some(p)));
        }
    }
    out
}

fn integrate_ranges<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    y_max: f64,
    cutoff: CutoffSpec,
    freq: f64,
) -> ([f64; N], f64) {
    let width = if freq > 0.0 { (PI / freq).min(4.0) } else { 4.0 };
    let mut value = [0.0; N];
    let mut error = 0.0;
    for (a, b, power) in ranges(y_max, cutoff) {
        let weighted = |y: f64| {
            let c = power.map_or(1.0, |p| y.powf(-p));
            f(y).map(|v| c * v)
        };
        let r = integrate_panels(&weighted, a, b, width, Tolerance::default());
        for i in 0..N {
            value[i] += r.value[i];
        }
        error += r.error;
    }
    (value, error)
}

/// Closed form of the isotropic part for `Y >= 40`.
fn isotropic_closed(t: f64) -> f64 {
    let x = PI * t;
    let hyper = if x > 300.0 {
        0.0
    } else {
        let s = x.sinh();
        PI * PI / (2.0 * s * s)
    };
    2.0 / 3.0 * (PI * PI / 6.0 - 0.5 / (t * t) + hyper)
}

/// Thermal contributions `(1/3) int C h (1 - cos yt)` and
/// `int C h (1 - cos yt) g(y t0)`.
pub fn thermal_correction(t: f64, t0: f64, y_max: f64, cutoff: CutoffSpec) -> ThermalParts {
    if t == 0.0 {
        return ThermalParts {
            iso: 0.0,
            an: 0.0,
            error: 0.0,
        };
    }
    let omega = t.max(t0);
    if omega <= FREQ_LIMIT {
        let (v, error) = integrate_ranges(
            |y| {
                let w = thermal_excess(y) * one_minus_cos(y * t);
                [w / 3.0, w * dipole_anisotropy(y * t0)]
            },
            y_max,
            cutoff,
            omega,
        );
        return ThermalParts {
            iso: v[0],
            an: v[1],
            error,
        };
    }

    let (iso, iso_err) = if y_max >= COTH_SATURATION && t >= 0.5 {
        (isotropic_closed(t), 1e-15)
    } else if t <= FREQ_LIMIT {
        let (v, e) = integrate_ranges(|y| [thermal_excess(y) * one_minus_cos(y * t) / 3.0], y_max, cutoff, t);
        (v[0], e)
    } else {
        let (v, e) = integrate_ranges(|y| [thermal_excess(y) / 3.0], y_max, cutoff, 0.0);
        (v[0], e + 1.0 / (t * t))
    };

    let (an, an_err) = if t0 <= FREQ_LIMIT {
        let (v, e) = integrate_ranges(|y| [thermal_excess(y) * dipole_anisotropy(y * t0)], y_max, cutoff, t0);
        (v[0], e + 2.0 / (t * t))
    } else {
        let s = (t / t0).min(1.0);
        (-0.5 * PI / t0 * s * s, 3.0 / (t0 * t0))
    };

    ThermalParts {
        iso,
        an,
        error: iso_err + an_err,
    }
}

/// Long-time limit of [`thermal_correction`].
pub fn thermal_long_time(t0: f64, y_max: f64, cutoff: CutoffSpec) -> ThermalParts {
    let (iso, iso_err) = if y_max >= COTH_SATURATION {
        (PI * PI / 9.0, 1e-15)
    } else {
        let (v, e) = integrate_ranges(|y| [thermal_excess(y) / 3.0], y_max, cutoff, 0.0);
        (v[0], e)
    };
    let (an, an_err) = if t0 <= FREQ_LIMIT {
        let (v, e) = integrate_ranges(|y| [thermal_excess(y) * dipole_anisotropy(y * t0)], y_max, cutoff, t0);
        (v[0], e)
    } else {
        (-0.5 * PI / t0, 3.0 / (t0 * t0))
    };
    ThermalParts {
        iso,
        an,
        error: iso_err + an_err,
    }
}
