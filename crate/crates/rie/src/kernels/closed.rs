//! Closed forms of the sharp-cutoff kernels with `coth(y/2)` replaced by 1.
//!
//! Splitting the angular weight as `w_nu(x) = 1/3 + (-1)^nu g(x)` with
//! `g(x) = cos x/x^2 - sin x/x^3`, and writing `X = Y t0`, `z = Y t`:
//!
//! ```text
//! int_0^Y y (1 - cos yt) / 3 dy        = Q(z) / (3 t^2)
//! int_0^Y y (1 - cos yt) g(y t0) dy    = [sin X (1 - cos z) / X
//!                                         - t/(2 t0) (Cin(Y(t+t0)) - Cin(Y|t-t0|))] / t0^2
//! int_0^Y y (yt - sin yt) / 3 dy       = P(z) / (3 t^2)
//! -2 int_0^Y y (yt - sin yt) g(y t0) dy = phi_minus(t, t0, Y)
//! ```
//!
//! with `Q(z) = z^2/2 - z sin z + 1 - cos z` and `P(z) = z^3/3 - sin z + z cos z`.

use crate::specialfn::{ci, cin, moment_one_minus_cos, moment_x_minus_sin, one_minus_cos, si};

/// `Cin(hi) - Cin(lo)` for `hi >= lo >= 0`, given `ln(hi/lo)` computed by the
/// caller without cancellation.
fn cin_difference(hi: f64, lo: f64, log_ratio: f64) -> f64 {
    if lo > 4.0 {
        log_ratio - (ci(hi) - ci(lo))
    } else {
        cin(hi) - cin(lo)
    }
}

/// Phase difference `phi_1 - phi_2` for a sharp cutoff.
pub fn phi_minus_closed(t: f64, t0: f64, y_max: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let x = y_max * t0;
    let sx = x.sin();
    let bracket = -2.0 * sx + si(y_max * (t - t0)) + 2.0 * si(x) - si(y_max * (t + t0));
    let t03 = t0 * t0 * t0;
    t / t03 * bracket + 2.0 * (y_max * t).sin() * sx / (y_max * t03)
}

/// Absolute rounding error of [`phi_minus_closed`], dominated by the
/// cancellation inside the bracket when `Y t0` is small.
pub fn phi_minus_rounding(t: f64, t0: f64, y_max: f64) -> f64 {
    let x = y_max * t0;
    8.0 * f64::EPSILON * t / (t0 * t0 * t0) * (1.0 + 1.0 / (x * x * x).min(1.0))
}

/// Isotropic decoherence integral `int_0^Y y (1 - cos yt)/3 dy`.
pub fn f_isotropic(t: f64, y_max: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    moment_one_minus_cos(y_max * t) / (3.0 * t * t)
}

/// Anisotropic decoherence integral `int_0^Y y (1 - cos yt) g(y t0) dy`.
pub fn f_anisotropic(t: f64, t0: f64, y_max: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let x = y_max * t0;
    let hi = y_max * (t + t0);
    let gap = (t - t0).abs();
    let lo = y_max * gap;
    let log_ratio = if gap > 0.0 {
        (2.0 * t.min(t0) / gap).ln_1p()
    } else {
        f64::INFINITY
    };
    let d = cin_difference(hi, lo, log_ratio);
    ((x.sin() / x) * one_minus_cos(y_max * t) - 0.5 * t / t0 * d) / (t0 * t0)
}

/// Long-time value of [`f_anisotropic`], `(sin X / X - 1) / t0^2`.
pub fn f_anisotropic_long_time(t0: f64, y_max: f64) -> f64 {
    let x = y_max * t0;
    (x.sin() / x - 1.0) / (t0 * t0)
}

/// Isotropic phase integral `int_0^Y y (yt - sin yt)/3 dy`.
pub fn phi_isotropic(t: f64, y_max: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    moment_x_minus_sin(y_max * t) / (3.0 * t * t)
}

/// `f_nu` with `coth = 1` and a sharp cutoff, in closed form.
pub fn f_nu_closed_coth_one(t: f64, t0: f64, y_max: f64, sign: f64) -> f64 {
    (f_isotropic(t, y_max) + sign * f_anisotropic(t, t0, y_max)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::dipole_anisotropy;
    use std::f64::consts::PI;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn anisotropic_matches_direct_integration() {
        for &(t, t0, y) in &[(5.0, 1.0, 20.0), (0.5, 2.0, 30.0), (2.0, 2.0, 10.0), (7.0, 0.3, 15.0)] {
            let oracle = simpson(|u| u * (1.0 - (u * t).cos()) * dipole_anisotropy(u * t0), 0.0, y, 200_000);
            let closed = f_anisotropic(t, t0, y);
            assert!((closed - oracle).abs() < 1e-9 * (1.0 + oracle.abs()), "{t} {t0} {y}: {closed} vs {oracle}");
        }
    }

    #[test]
    fn phase_difference_matches_direct_integration() {
        for &(t, t0, y) in &[(5.0, 1.0, 20.0), (0.5, 2.0, 30.0), (3.0, 0.7, 12.0)] {
            let oracle = -2.0
                * simpson(|u| u * (u * t - (u * t).sin()) * dipole_anisotropy(u * t0), 0.0, y, 200_000);
            let closed = phi_minus_closed(t, t0, y);
            assert!((closed - oracle).abs() < 1e-8 * oracle.abs().max(1.0), "{closed} vs {oracle}");
        }
    }

    #[test]
    fn light_cone_step() {
        let t0 = 3.0;
        let y = 100.0 * PI / t0;
        let after = phi_minus_closed(2.0 * t0, t0, y) * t0.powi(3) / (2.0 * t0);
        let before = phi_minus_closed(0.5 * t0, t0, y) * t0.powi(3) / (0.5 * t0);
        // Residuals are -(8/3)/X and +(2/3)/X at X = 100 pi.
        let x = y * t0;
        assert!((after - PI + 8.0 / (3.0 * x)).abs() < 1e-5);
        assert!((before - 2.0 / (3.0 * x)).abs() < 1e-5);
    }

    #[test]
    fn long_time_limits() {
        let (t0, y) = (2.0, 16.0 * PI);
        let t = 1e9;
        let an = f_anisotropic(t, t0, y);
        assert!((an - f_anisotropic_long_time(t0, y)).abs() < 1e-6);
        assert!((phi_minus_closed(t, t0, y) / t - (2.0 * crate::specialfn::si(y * t0) - 2.0 * (y * t0).sin()) / t0.powi(3)).abs() < 1e-9);
    }

    #[test]
    fn survives_extreme_ratios() {
        let v = f_anisotropic(1e16, 1.0, 4250.0);
        assert!(v.is_finite());
        assert!((v - f_anisotropic_long_time(1.0, 4250.0)).abs() < 1e-3);
        assert!(phi_minus_closed(1e16, 1.0, 4250.0).is_finite());
        assert!(phi_isotropic(1e16, 4250.0).is_finite());
    }
}
