//! Contributions of the power-law cutoff region `y > Y`, where the integrand
//! carries the extra factor `y^-p`.
//!
//! All pieces reduce to `T(q, a) = int_Y^inf y^-q e^{iay} dy`, which is
//! `Y^(1-q) E_q(-iaY)` in terms of the generalized exponential integral.

use crate::quadrature::gauss_legendre;
use num_complex::Complex64;

/// `E_q(w)` by the modified Lentz continued fraction, valid for `|w| >= 2`
/// away from the negative real axis.
fn expint_cf(q: f64, w: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = w + q;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..100_000 {
        let i = i as f64;
        let an = -i * (q - 1.0 + i);
        b += 2.0;
        d = (d * an + b).inv();
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-w).exp()
}

/// `int_Y^inf y^-q e^{iay} dy` for `q > 1`, `a >= 0`, `Y > 0`.
pub fn power_tail(q: f64, a: f64, y: f64) -> Complex64 {
    if a == 0.0 {
        return Complex64::new(y.powf(1.0 - q) / (q - 1.0), 0.0);
    }
    let z = a * y;
    if z >= 2.0 {
        return expint_cf(q, Complex64::new(0.0, -z)) * y.powf(1.0 - q);
    }
    // Non-oscillatory stretch [Y, 2/a] on geometrically growing panels.
    let top = 2.0 / a;
    let f = |u: f64| {
        let (s, c) = (a * u).sin_cos();
        let m = u.powf(-q);
        [m * c, m * s]
    };
    let mut acc = [0.0; 2];
    let mut lo = y;
    while lo < top {
        let hi = (2.0 * lo).min(top);
        let part = gauss_legendre(&f, lo, hi);
        acc[0] += part[0];
        acc[1] += part[1];
        lo = hi;
    }
    Complex64::new(acc[0], acc[1]) + expint_cf(q, Complex64::new(0.0, -2.0)) * top.powf(1.0 - q)
}

/// `int_Y^inf y^-q cos(ay) dy`.
fn cos_tail(q: f64, a: f64, y: f64) -> f64 {
    power_tail(q, a, y).re
}

/// `int_Y^inf y^-q sin(ay) dy` for any sign of `a`.
fn sin_tail(q: f64, a: f64, y: f64) -> f64 {
    a.signum() * power_tail(q, a.abs(), y).im
}

/// `(1/3) int_Y^inf y^(1-p) (1 - cos yt) dy`.
pub fn isotropic(t: f64, y: f64, p: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    (y.powf(2.0 - p) / (p - 2.0) - cos_tail(p - 1.0, t, y)) / 3.0
}

/// `int_Y^inf y^(1-p) (1 - cos yt) g(y t0) dy`.
pub fn anisotropic(t: f64, t0: f64, y: f64, p: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let (q1, q2) = (p + 1.0, p + 2.0);
    let cos_part =
        cos_tail(q1, t0, y) - 0.5 * cos_tail(q1, t + t0, y) - 0.5 * cos_tail(q1, (t - t0).abs(), y);
    let sin_part = sin_tail(q2, t0, y) - 0.5 * sin_tail(q2, t0 + t, y) - 0.5 * sin_tail(q2, t0 - t, y);
    cos_part / (t0 * t0) - sin_part / (t0 * t0 * t0)
}

/// Long-time (cycle-averaged) value of [`isotropic`].
pub fn isotropic_long_time(y: f64, p: f64) -> f64 {
    y.powf(2.0 - p) / (3.0 * (p - 2.0))
}

/// Long-time (cycle-averaged) value of [`anisotropic`].
pub fn anisotropic_long_time(t0: f64, y: f64, p: f64) -> f64 {
    cos_tail(p + 1.0, t0, y) / (t0 * t0) - sin_tail(p + 2.0, t0, y) / (t0 * t0 * t0)
}
