//! Special functions for the kernel integrals and the entanglement measures.
//!
//! The sine and cosine integrals use their power series for `|x| <= 4` and the
//! continued fraction of `E1(ix)` beyond, which stays accurate for arguments
//! far past `1e9`. Several elementary combinations that cancel badly near the
//! origin (`1 - cos x`, `x - sin x` and the moments built from them) are
//! provided in stable form.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `y coth(y/2)` is replaced by `y` above this point (`coth(20) - 1 < 1e-17`).
pub const COTH_SATURATION: f64 = 40.0;

const SERIES_SWITCH: f64 = 4.0;
const WEIGHT_SWITCH: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{function}: argument {value} is outside the domain")]
pub struct DomainError {
    pub function: &'static str,
    pub value: f64,
}

/// The two independent radiation baths: cos-waves (`nu = 1`) and sin-waves
/// (`nu = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    Cos,
    Sin,
}

impl Bath {
    pub const BOTH: [Bath; 2] = [Bath::Cos, Bath::Sin];

    pub fn from_index(nu: u8) -> Option<Bath> {
        match nu {
            1 => Some(Bath::Cos),
            2 => Some(Bath::Sin),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Bath::Cos => 1,
            Bath::Sin => 2,
        }
    }

    /// `(-1)^nu`.
    pub fn sign(self) -> f64 {
        match self {
            Bath::Cos => -1.0,
            Bath::Sin => 1.0,
        }
    }
}

/// `Si(x)`; errors on non-finite input.
pub fn sine_integral(x: f64) -> Result<f64, DomainError> {
    if !x.is_finite() {
        return Err(DomainError {
            function: "sine_integral",
            value: x,
        });
    }
    Ok(si(x))
}

/// `Ci(x)` for finite `x > 0`.
pub fn cosine_integral(x: f64) -> Result<f64, DomainError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(DomainError {
            function: "cosine_integral",
            value: x,
        });
    }
    Ok(ci(x))
}

/// Entire cosine integral `Cin(x) = int_0^x (1 - cos u)/u du`.
pub fn cin(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_SWITCH {
        cin_series(x)
    } else {
        EULER_GAMMA + x.ln() - si_ci_large(x).1
    }
}

pub(crate) fn si(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= SERIES_SWITCH {
        si_series(ax)
    } else {
        si_ci_large(ax).0
    };
    value.copysign(x)
}

pub(crate) fn ci(x: f64) -> f64 {
    if x <= SERIES_SWITCH {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        si_ci_large(x).1
    }
}

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        k += 1.0;
        let add = term / (2.0 * k + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            return sum;
        }
    }
}

fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 0.5 * x2;
    let mut sum = 0.5 * term;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= -x2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        k += 1.0;
        sum += term / (2.0 * k);
    }
    sum
}

/// `(Si(x), Ci(x))` for `x > 2` from the continued fraction of `E1(ix)`.
fn si_ci_large(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..100_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    let e1 = Complex64::new(co, -s) * h;
    (FRAC_PI_2 + e1.im, -e1.re)
}

/// Anisotropic part of the angular weight, `cos x / x^2 - sin x / x^3`.
pub fn dipole_anisotropy(x: f64) -> f64 {
    weight_sin_bath(x) - 1.0 / 3.0
}

/// `1/3 + cos x/x^2 - sin x/x^3`, computed without cancellation near zero.
fn weight_sin_bath(x: f64) -> f64 {
    if x < WEIGHT_SWITCH {
        // sum_{m>=2} (-1)^m 2m x^(2m-2) / (2m+1)!
        let x2 = x * x;
        let mut pow = x2;
        let mut fact = 120.0;
        let mut sum = 0.0;
        for m in 2..12 {
            let m = m as f64;
            let term = 2.0 * m * pow / fact;
            sum += if m as u32 % 2 == 0 { term } else { -term };
            pow *= x2;
            fact *= (2.0 * m + 2.0) * (2.0 * m + 3.0);
        }
        sum
    } else {
        let (s, c) = x.sin_cos();
        1.0 / 3.0 + c / (x * x) - s / (x * x * x)
    }
}

/// Angular weight `w_nu(x) = 1/3 + (-1)^nu (cos x/x^2 - sin x/x^3)` for `x >= 0`.
pub fn geometric_weight(nu: Bath, x: f64) -> f64 {
    let w2 = weight_sin_bath(x);
    match nu {
        Bath::Sin => w2,
        Bath::Cos => 2.0 / 3.0 - w2,
    }
}

/// `coth(y/2)` for `y > 0`.
pub fn coth_half(y: f64) -> Result<f64, DomainError> {
    if !(y > 0.0) {
        return Err(DomainError {
            function: "coth_half",
            value: y,
        });
    }
    Ok(if y < 1e-4 {
        2.0 / y + y / 6.0
    } else if y > COTH_SATURATION {
        1.0
    } else {
        1.0 / (0.5 * y).tanh()
    })
}

/// `y coth(y/2)`, continuous at `y = 0` where it equals 2.
pub fn y_coth_half(y: f64) -> f64 {
    if y < 1e-4 {
        2.0 + y * y / 6.0
    } else if y > COTH_SATURATION {
        y
    } else {
        y / (0.5 * y).tanh()
    }
}

/// Thermal excess `y coth(y/2) - y = 2y/(e^y - 1)`, cut to zero where
/// [`y_coth_half`] saturates.
pub fn thermal_excess(y: f64) -> f64 {
    if y > COTH_SATURATION {
        0.0
    } else if y < 1e-8 {
        2.0 - y
    } else {
        2.0 * y / y.exp_m1()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(DomainError {
            function: "binary_entropy",
            value: x,
        });
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// `1 - cos x`.
pub fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// `x - sin x`.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for k in 2..12 {
            let k = k as f64;
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// `int_0^z u (1 - cos u) du = z^2/2 - z sin z + 1 - cos z`.
pub fn moment_one_minus_cos(z: f64) -> f64 {
    if z < 2.0 {
        // sum_{m>=1} (-1)^(m+1) z^(2m+2) / ((2m+2) (2m)!)
        let z2 = z * z;
        let mut pow = z2 * z2;
        let mut fact = 2.0;
        let mut sum = 0.0;
        for m in 1..20 {
            let mf = m as f64;
            let term = pow / ((2.0 * mf + 2.0) * fact);
            sum += if m % 2 == 1 { term } else { -term };
            pow *= z2;
            fact *= (2.0 * mf + 1.0) * (2.0 * mf + 2.0);
        }
        sum
    } else {
        0.5 * z * z - z * z.sin() + one_minus_cos(z)
    }
}

/// `int_0^z u (u - sin u) du = z^3/3 - sin z + z cos z`.
pub fn moment_x_minus_sin(z: f64) -> f64 {
    if z < 2.0 {
        // sum_{m>=1} (-1)^(m+1) z^(2m+3) / ((2m+3) (2m+1)!)
        let z2 = z * z;
        let mut pow = z2 * z2 * z;
        let mut fact = 6.0;
        let mut sum = 0.0;
        for m in 1..20 {
            let mf = m as f64;
            let term = pow / ((2.0 * mf + 3.0) * fact);
            sum += if m % 2 == 1 { term } else { -term };
            pow *= z2;
            fact *= (2.0 * mf + 2.0) * (2.0 * mf + 3.0);
        }
        sum
    } else {
        let (s, c) = z.sin_cos();
        z * z * z / 3.0 - s + z * c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Composite Simpson rule, used as an independent oracle.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    fn sinc(u: f64) -> f64 {
        if u == 0.0 {
            1.0
        } else {
            u.sin() / u
        }
    }

    #[test]
    fn si_reference_values() {
        assert_eq!(sine_integral(0.0).unwrap(), 0.0);
        assert!((sine_integral(PI).unwrap() - 1.851_937_052).abs() < 1e-9);
        let x = 1e6;
        assert!((sine_integral(x).unwrap() - FRAC_PI_2).abs() < 2e-6);
        let asym = FRAC_PI_2 - x.cos() / x - x.sin() / (x * x);
        assert!((si(x) - asym).abs() < 1e-12);
        assert!(sine_integral(f64::NAN).is_err());
        assert!(sine_integral(f64::INFINITY).is_err());
    }

    #[test]
    fn si_matches_quadrature_across_switch() {
        for &x in &[0.3, 1.0, 2.5, 3.999, 4.0, 4.001, 6.0, 11.0, 25.0] {
            let oracle = simpson(sinc, 0.0, x, 20_000);
            assert!((si(x) - oracle).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn si_large_argument_asymptotics() {
        for &x in &[1e3f64, 12345.678, 1e7, 1e8] {
            let (s, c) = (x.sin(), x.cos());
            let x2 = x * x;
            let f = (1.0 - 2.0 / x2 + 24.0 / (x2 * x2)) / x;
            let g = (1.0 - 6.0 / x2 + 120.0 / (x2 * x2)) / x2;
            assert!((si(x) - (FRAC_PI_2 - f * c - g * s)).abs() < 1e-12);
            assert!((ci(x) - (f * s - g * c)).abs() < 1e-12);
        }
    }

    #[test]
    fn cin_and_ci_consistent() {
        for &x in &[0.1, 1.0, 3.9, 4.1, 7.5, 30.0] {
            let oracle = simpson(|u| if u == 0.0 { 0.0 } else { (1.0 - u.cos()) / u }, 0.0, x, 20_000);
            assert!((cin(x) - oracle).abs() < 1e-12, "x = {x}");
            let back = EULER_GAMMA + x.ln() - cin(x);
            assert!((cosine_integral(x).unwrap() - back).abs() < 1e-13);
        }
        assert!(cosine_integral(0.0).is_err());
    }

    #[test]
    fn si_is_odd() {
        for &x in &[0.5, 3.0, 5.0, 1e4] {
            assert_eq!(si(-x), -si(x));
        }
    }

    #[test]
    fn weight_limits() {
        assert!(geometric_weight(Bath::Sin, 1e-6) <= 1e-13);
        assert!(geometric_weight(Bath::Sin, 1e-6) >= 0.0);
        assert!((geometric_weight(Bath::Cos, 1e-6) - 2.0 / 3.0).abs() < 1e-12);
        for nu in Bath::BOTH {
            assert!((geometric_weight(nu, 1e6) - 1.0 / 3.0).abs() < 1e-11);
        }
    }

    #[test]
    fn weight_series_matches_closed_form_at_switch() {
        let x = WEIGHT_SWITCH;
        let (s, c) = x.sin_cos();
        let closed = 1.0 / 3.0 + c / (x * x) - s / (x * x * x);
        let series = weight_sin_bath(x * (1.0 - 1e-15));
        assert!((closed - series).abs() < 1e-14);
    }

    #[test]
    fn weight_matches_angular_average() {
        // w_nu(x) is the average of sin^2(theta) * trig^2(x cos(theta)/2) over the sphere.
        for &x in &[0.05, 0.7, 2.0, 9.0] {
            let w_cos = simpson(
                |u: f64| 0.5 * (1.0 - u * u) * (0.5 * x * u).cos().powi(2),
                -1.0,
                1.0,
                4000,
            );
            let w_sin = simpson(
                |u: f64| 0.5 * (1.0 - u * u) * (0.5 * x * u).sin().powi(2),
                -1.0,
                1.0,
                4000,
            );
            assert!((geometric_weight(Bath::Cos, x) - w_cos).abs() < 1e-10, "x = {x}");
            assert!((geometric_weight(Bath::Sin, x) - w_sin).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn coth_values() {
        assert!((coth_half(2.0).unwrap() - 1.313_035_285).abs() < 1e-9);
        assert_eq!(coth_half(100.0).unwrap(), 1.0);
        let y = 1e-6;
        let expected = 2e6 + 1.0 / 6.0 * 1e-6;
        assert!(((coth_half(y).unwrap() - expected) / expected).abs() < 1e-9);
        assert!(coth_half(0.0).is_err());
        assert!(coth_half(-1.0).is_err());
        for &y in &[1e-5, 0.5, 3.0, 39.0] {
            let lhs = y_coth_half(y) - y;
            assert!((lhs - thermal_excess(y)).abs() < 1e-12 * (1.0 + lhs));
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert!((binary_entropy(0.984_122_9).unwrap() - 0.11762).abs() < 1e-4);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn stable_elementary_combinations() {
        for &x in &[1e-9, 1e-3, 0.3, 0.999, 1.0, 2.0, 50.0] {
            assert!((one_minus_cos(x) - (1.0 - x.cos())).abs() <= 1e-16 + 1e-15 * x * x);
            let direct = if x > 0.1 { x - x.sin() } else { x * x * x / 6.0 - x.powi(5) / 120.0 + x.powi(7) / 5040.0 };
            assert!((x_minus_sin(x) - direct).abs() <= 4e-16 * x + 1e-15 * direct.abs());
        }
        for &z in &[0.01, 0.5, 1.9999, 2.0, 2.0001, 7.0, 40.0] {
            let q = simpson(|u| u * one_minus_cos(u), 0.0, z, 20_000);
            let p = simpson(|u| u * x_minus_sin(u), 0.0, z, 20_000);
            assert!((moment_one_minus_cos(z) - q).abs() <= 1e-11 * q.abs().max(1e-12), "z = {z}");
            assert!((moment_x_minus_sin(z) - p).abs() <= 1e-11 * p.abs().max(1e-12), "z = {z}");
        }
    }
}
