//! Bath-induced interaction between the two dots by explicit summation over
//! the modes of a periodic box.
//!
//! Eliminating the field gives the coefficient of `sigma_z1 sigma_z2`
//!
//! ```text
//! J = -(1 / (eps0 L^3)) sum_{k != 0} e^{-c|k| eta} cos(k.R) sum_alpha (d1.e_alpha)(d2.e_alpha)
//! ```
//!
//! with `d_i = (e d / 2) u_i` and `k = 2 pi n / L`. The regulated continuum
//! sum expands in odd powers of `c eta / R`, so three regulators
//! `eta0, 2 eta0, 4 eta0` remove the first two orders:
//! `J = (16 J(eta0) - 10 J(2 eta0) + J(4 eta0)) / 7`.

use crate::model::CONSTANTS;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::{self, Write};
use thiserror::Error;

/// Modes are kept while `c |k| eta0 <= REGULATOR_CUT`.
pub const REGULATOR_CUT: f64 = 16.0;
/// Smallest `c k_max eta` accepted before the sum is flagged as truncated.
pub const MIN_DECAY: f64 = 12.0;
/// Default box side in units of `|R|`.
pub const BOX_RATIO: f64 = 10.0;
/// Default base regulator in units of `|R| / c0`.
pub const ETA_RATIO: f64 = 0.1;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EffIntError {
    #[error("separation |R| = {r:e} m must be below half the box side L/2 = {half:e} m")]
    Geometry { r: f64, half: f64 },
    #[error("zero separation: the dipole interaction is singular")]
    Singular,
    #[error("`{name}` must be a unit vector, |{name}| = {norm}")]
    NotUnit { name: &'static str, norm: f64 },
    #[error("`{name}` = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "n_max = {n_max} truncates the regulated sum at c k_max eta = {decay:.2}; \
         at least {required} is needed"
    )]
    Underresolved { n_max: usize, decay: f64, required: usize },
    #[error("polarization basis undefined for k = 0")]
    ZeroWaveVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSumConfig {
    /// Box side in metres.
    pub l: f64,
    /// Largest `|n|` kept (spherical truncation).
    pub n_max: usize,
    pub r_vec: Vec3,
    pub u1: Vec3,
    pub u2: Vec3,
    /// Dipole length in metres.
    pub d: f64,
    /// Regulator time in seconds.
    pub regulator_eta: f64,
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

impl ModeSumConfig {
    /// Box of side `10 |R|`, regulator `|R| / (10 c0)` and enough modes for it.
    pub fn standard(r_vec: Vec3, u1: Vec3, u2: Vec3, d: f64) -> Self {
        let r = norm(r_vec);
        let l = BOX_RATIO * r;
        let eta = ETA_RATIO * r / CONSTANTS.c0;
        ModeSumConfig {
            l,
            n_max: required_n_max(l, eta),
            r_vec,
            u1,
            u2,
            d,
            regulator_eta: eta,
        }
    }

    /// Same physical regulator in a box of side `l`.
    pub fn with_box(self, l: f64) -> Self {
        ModeSumConfig {
            l,
            n_max: required_n_max(l, self.regulator_eta),
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), EffIntError> {
        for (name, u) in [("u1", self.u1), ("u2", self.u2)] {
            let n = norm(u);
            if !((n - 1.0).abs() <= 1e-12) {
                return Err(EffIntError::NotUnit { name, norm: n });
            }
        }
        for (name, value) in [("L", self.l), ("d", self.d)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(EffIntError::Domain {
                    name,
                    value,
                    reason: "must be finite and positive",
                });
            }
        }
        if !(self.regulator_eta.is_finite() && self.regulator_eta >= 0.0) {
            return Err(EffIntError::Domain {
                name: "regulator_eta",
                value: self.regulator_eta,
                reason: "must be finite and non-negative",
            });
        }
        if self.n_max == 0 {
            return Err(EffIntError::Domain {
                name: "n_max",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        let r = norm(self.r_vec);
        if r == 0.0 {
            return Err(EffIntError::Singular);
        }
        if !(r < 0.5 * self.l) {
            return Err(EffIntError::Geometry { r, half: 0.5 * self.l });
        }
        Ok(())
    }

    fn check_resolution(&self, eta: f64) -> Result<(), EffIntError> {
        if eta == 0.0 {
            return Ok(());
        }
        let k_max = 2.0 * PI * self.n_max as f64 / self.l;
        let decay = CONSTANTS.c0 * k_max * eta;
        if decay < MIN_DECAY {
            return Err(EffIntError::Underresolved {
                n_max: self.n_max,
                decay,
                required: (MIN_DECAY * self.l / (2.0 * PI * CONSTANTS.c0 * eta)).ceil() as usize,
            });
        }
        Ok(())
    }

    /// `(e d / 2)^2 / (eps0 L^3)`.
    fn prefactor(&self) -> f64 {
        let p = 0.5 * CONSTANTS.e_charge * self.d;
        -p * p / (CONSTANTS.eps0 * self.l.powi(3))
    }
}

/// Smallest `n_max` keeping all modes with `c |k| eta <= REGULATOR_CUT`.
pub fn required_n_max(l: f64, eta: f64) -> usize {
    (REGULATOR_CUT * l / (2.0 * PI * CONSTANTS.c0 * eta)).ceil() as usize
}

/// Closed-form dipole coupling `(d1.d2 - 3 (d1.r)(d2.r)) / (4 pi eps0 R^3)`.
pub fn analytic_dipole_coefficient(u1: Vec3, u2: Vec3, r_vec: Vec3, d: f64) -> Result<f64, EffIntError> {
    let r = norm(r_vec);
    if r == 0.0 {
        return Err(EffIntError::Singular);
    }
    let rhat = scale(r_vec, 1.0 / r);
    let p = 0.5 * CONSTANTS.e_charge * d;
    Ok(p * p * (dot(u1, u2) - 3.0 * dot(u1, rhat) * dot(u2, rhat)) / (4.0 * PI * CONSTANTS.eps0 * r.powi(3)))
}

/// Two orthonormal polarization vectors transverse to `k`: the first is
/// `z` (or `x` when `k` is nearly parallel to `z`) orthogonalized against
/// `k`, the second completes a right-handed triad.
pub fn polarization_basis(k: Vec3) -> Result<[Vec3; 2], EffIntError> {
    let n = norm(k);
    if n == 0.0 {
        return Err(EffIntError::ZeroWaveVector);
    }
    let khat = scale(k, 1.0 / n);
    let project = |r: Vec3| {
        let c = dot(r, khat);
        [r[0] - c * khat[0], r[1] - c * khat[1], r[2] - c * khat[2]]
    };
    let mut e1 = project([0.0, 0.0, 1.0]);
    if norm(e1) < 0.5 {
        e1 = project([1.0, 0.0, 0.0]);
    }
    let e1 = scale(e1, 1.0 / norm(e1));
    Ok([e1, cross(khat, e1)])
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.c
    }
}

/// `e^{-x r}` for each ratio `r`, exponentiating once when the ratios are
/// small integers.
struct Decays {
    ratios: Vec<f64>,
    integer: Option<Vec<i32>>,
}

impl Decays {
    fn new(etas: &[f64]) -> (f64, Decays) {
        let base = etas.iter().copied().filter(|&e| e > 0.0).fold(f64::INFINITY, f64::min);
        let base = if base.is_finite() { base } else { 0.0 };
        let ratios: Vec<f64> = etas.iter().map(|&e| if base > 0.0 { e / base } else { 0.0 }).collect();
        let integer = ratios
            .iter()
            .map(|&r| (r.fract() == 0.0 && r <= 16.0).then_some(r as i32))
            .collect::<Option<Vec<_>>>();
        (base, Decays { ratios, integer })
    }

    #[inline]
    fn fill(&self, x: f64, out: &mut [f64]) {
        match &self.integer {
            Some(powers) => {
                let e = (-x).exp();
                for (o, &p) in out.iter_mut().zip(powers) {
                    *o = e.powi(p);
                }
            }
            None => {
                for (o, &r) in out.iter_mut().zip(&self.ratios) {
                    *o = (-x * r).exp();
                }
            }
        }
    }
}

/// `Some((axis of R, axis shared by u1 and u2, sign))` when the geometry is
/// axis aligned.
fn axial_geometry(cfg: &ModeSumConfig) -> Option<(usize, Option<(usize, f64)>)> {
    let single = |v: Vec3| {
        let nz: Vec<usize> = (0..3).filter(|&i| v[i] != 0.0).collect();
        (nz.len() == 1).then(|| nz[0])
    };
    let a = single(cfg.r_vec)?;
    let i = single(cfg.u1)?;
    let j = single(cfg.u2)?;
    if (cfg.u1[i].abs() - 1.0).abs() > 0.0 || (cfg.u2[j].abs() - 1.0).abs() > 0.0 {
        return None;
    }
    Some((a, (i == j).then(|| (i, cfg.u1[i] * cfg.u2[j]))))
}

/// Regulated sums `sum_{n_b, n_c} (1 - k_p^2/k^2) e^{-c k eta}` over the two
/// axes other than `a`, for every `n_a >= 0`, over the octant with
/// multiplicities. `p` is the polarization axis.
fn axial_profile(l: f64, n_max: usize, a: usize, p: usize, etas: &[f64]) -> Vec<Vec<f64>> {
    let (base, decays) = Decays::new(etas);
    let m = etas.len();
    let kunit = 2.0 * PI / l;
    let xunit = CONSTANTS.c0 * base * kunit;
    let nmax2 = (n_max * n_max) as i64;
    (0..=n_max)
        .into_par_iter()
        .map(|na| {
            let mut totals = vec![Compensated::default(); m];
            let mut row = vec![0.0; m];
            let mut e = vec![0.0; m];
            let na2 = (na * na) as i64;
            let wa = if na == 0 { 1.0 } else { 2.0 };
            let nb_max = ((nmax2 - na2) as f64).sqrt() as i64;
            for nb in 0..=nb_max {
                let nb2 = nb * nb;
                let wb = if nb == 0 { 1.0 } else { 2.0 };
                let nc_max = ((nmax2 - na2 - nb2) as f64).sqrt() as i64;
                row.iter_mut().for_each(|r| *r = 0.0);
                for nc in 0..=nc_max {
                    let n2 = na2 + nb2 + nc * nc;
                    if n2 == 0 {
                        continue;
                    }
                    let wc = if nc == 0 { 1.0 } else { 2.0 };
                    // The axes other than `a` appear as (b, c) in a fixed order.
                    let np2 = if p == a {
                        na2
                    } else if p == (a + 1) % 3 {
                        nb2
                    } else {
                        nc * nc
                    };
                    let n = (n2 as f64).sqrt();
                    let weight = wb * wc * (1.0 - np2 as f64 / n2 as f64);
                    decays.fill(xunit * n, &mut e);
                    for (r, &ei) in row.iter_mut().zip(&e) {
                        *r += weight * ei;
                    }
                }
                for (t, &r) in totals.iter_mut().zip(&row) {
                    t.add(r);
                }
            }
            totals.iter().map(|t| wa * t.value()).collect()
        })
        .collect()
}

fn axial_sums(cfg: &ModeSumConfig, etas: &[f64], radii: &[f64], a: usize, pol: Option<(usize, f64)>) -> Vec<Vec<f64>> {
    let Some((p, sign)) = pol else {
        return radii.iter().map(|_| vec![0.0; etas.len()]).collect();
    };
    let profile = axial_profile(cfg.l, cfg.n_max, a, p, etas);
    let pref = cfg.prefactor() * sign;
    radii
        .iter()
        .map(|&r| {
            (0..etas.len())
                .map(|m| {
                    let mut acc = Compensated::default();
                    for (na, t) in profile.iter().enumerate() {
                        acc.add((2.0 * PI * na as f64 * r / cfg.l).cos() * t[m]);
                    }
                    pref * acc.value()
                })
                .collect()
        })
        .collect()
}

/// Half-space sum with an explicit polarization basis per mode.
fn general_sums(cfg: &ModeSumConfig, etas: &[f64]) -> Vec<f64> {
    let (base, decays) = Decays::new(etas);
    let m = etas.len();
    let kunit = 2.0 * PI / cfg.l;
    let xunit = CONSTANTS.c0 * base * kunit;
    let n = cfg.n_max as i64;
    let nmax2 = n * n;
    let shards: Vec<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|nz| {
            let mut totals = vec![Compensated::default(); m];
            let mut row = vec![0.0; m];
            let mut e = vec![0.0; m];
            for ny in -n..=n {
                let rem = nmax2 - nz * nz - ny * ny;
                if rem < 0 {
                    continue;
                }
                let nx_max = (rem as f64).sqrt() as i64;
                row.iter_mut().for_each(|r| *r = 0.0);
                for nx in -nx_max..=nx_max {
                    // Keep one of each pair n, -n.
                    let positive = nz > 0 || (nz == 0 && (ny > 0 || (ny == 0 && nx > 0)));
                    if !positive {
                        continue;
                    }
                    let k = [nx as f64 * kunit, ny as f64 * kunit, nz as f64 * kunit];
                    let [e1, e2] = polarization_basis(k).expect("k != 0");
                    let pol = dot(cfg.u1, e1) * dot(cfg.u2, e1) + dot(cfg.u1, e2) * dot(cfg.u2, e2);
                    let weight = 2.0 * pol * dot(k, cfg.r_vec).cos();
                    let nn = ((nx * nx + ny * ny + nz * nz) as f64).sqrt();
                    decays.fill(xunit * nn, &mut e);
                    for (r, &ei) in row.iter_mut().zip(&e) {
                        *r += weight * ei;
                    }
                }
                for (t, &r) in totals.iter_mut().zip(&row) {
                    t.add(r);
                }
            }
            totals.iter().map(|t| t.value()).collect()
        })
        .collect();
    let pref = cfg.prefactor();
    (0..m)
        .map(|i| {
            let mut acc = Compensated::default();
            for s in &shards {
                acc.add(s[i]);
            }
            pref * acc.value()
        })
        .collect()
}

/// Coefficients for several regulators over the same set of modes.
pub fn mode_sums(cfg: &ModeSumConfig, etas: &[f64]) -> Result<Vec<f64>, EffIntError> {
    cfg.validate()?;
    for &eta in etas {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(EffIntError::Domain {
                name: "eta",
                value: eta,
                reason: "must be finite and non-negative",
            });
        }
        cfg.check_resolution(eta)?;
    }
    Ok(match axial_geometry(cfg) {
        Some((a, pol)) => axial_sums(cfg, etas, &[norm(cfg.r_vec)], a, pol).remove(0),
        None => general_sums(cfg, etas),
    })
}

/// Coefficient of `sigma_z1 sigma_z2` at the configured regulator.
pub fn mode_sum_coefficient(cfg: &ModeSumConfig) -> Result<f64, EffIntError> {
    mode_sums(cfg, &[cfg.regulator_eta]).map(|v| v[0])
}

/// Combination of `J(eta0), J(2 eta0), J(4 eta0)` free of the `eta` and
/// `eta^3` terms.
pub fn richardson(j1: f64, j2: f64, j4: f64) -> f64 {
    (16.0 * j1 - 10.0 * j2 + j4) / 7.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    /// Coefficients at `eta0, 2 eta0, 4 eta0`.
    pub raw: [f64; 3],
    pub value: f64,
}

/// Regulator-free coefficient, with `cfg.regulator_eta` as `eta0`.
pub fn extrapolated_coefficient(cfg: &ModeSumConfig) -> Result<Extrapolation, EffIntError> {
    let eta = cfg.regulator_eta;
    if !(eta > 0.0) {
        return Err(EffIntError::Domain {
            name: "regulator_eta",
            value: eta,
            reason: "extrapolation needs a positive base regulator",
        });
    }
    let v = mode_sums(cfg, &[eta, 2.0 * eta, 4.0 * eta])?;
    Ok(Extrapolation {
        raw: [v[0], v[1], v[2]],
        value: richardson(v[0], v[1], v[2]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub r: f64,
    pub coefficient: f64,
    pub analytic: f64,
}

/// Extrapolated coefficients for separations `radii` along `z` in one box
/// with one regulator; `u` is the common dipole axis (0, 1 or 2).
pub fn separation_sweep(
    l: f64,
    eta0: f64,
    u: usize,
    d: f64,
    radii: &[f64],
) -> Result<Vec<SweepPoint>, EffIntError> {
    let mut axis = [0.0; 3];
    axis[u.min(2)] = 1.0;
    let r_far = radii.iter().copied().fold(0.0, f64::max);
    let cfg = ModeSumConfig {
        l,
        n_max: required_n_max(l, eta0),
        r_vec: [0.0, 0.0, r_far],
        u1: axis,
        u2: axis,
        d,
        regulator_eta: eta0,
    };
    for &r in radii {
        ModeSumConfig {
            r_vec: [0.0, 0.0, r],
            ..cfg
        }
        .validate()?;
    }
    let etas = [eta0, 2.0 * eta0, 4.0 * eta0];
    for &eta in &etas {
        cfg.check_resolution(eta)?;
    }
    let sums = axial_sums(&cfg, &etas, radii, 2, Some((u.min(2), 1.0)));
    radii
        .iter()
        .zip(sums)
        .map(|(&r, j)| {
            Ok(SweepPoint {
                r,
                coefficient: richardson(j[0], j[1], j[2]),
                analytic: analytic_dipole_coefficient(axis, axis, [0.0, 0.0, r], d)?,
            })
        })
        .collect()
}

/// Least-squares slope of `log|y|` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub l: f64,
    pub n_max: usize,
    /// Regulator in seconds; zero marks the extrapolated value.
    pub eta: f64,
    pub r: f64,
    pub coefficient: f64,
    pub analytic: f64,
    pub rel_err: f64,
}

/// Raw and extrapolated coefficients for each configuration.
pub fn convergence_study(configs: &[ModeSumConfig]) -> Result<Vec<ConvergenceRow>, EffIntError> {
    let mut rows = Vec::new();
    for cfg in configs {
        let ex = extrapolated_coefficient(cfg)?;
        let analytic = analytic_dipole_coefficient(cfg.u1, cfg.u2, cfg.r_vec, cfg.d)?;
        let rel = |j: f64| {
            if analytic == 0.0 {
                f64::NAN
            } else {
                (j - analytic) / analytic.abs()
            }
        };
        let etas = [cfg.regulator_eta, 2.0 * cfg.regulator_eta, 4.0 * cfg.regulator_eta];
        for (eta, j) in etas.iter().zip(ex.raw).chain([(&0.0, ex.value)]) {
            rows.push(ConvergenceRow {
                l: cfg.l,
                n_max: cfg.n_max,
                eta: *eta,
                r: norm(cfg.r_vec),
                coefficient: j,
                analytic,
                rel_err: rel(j),
            });
        }
    }
    Ok(rows)
}

pub fn write_convergence_csv(rows: &[ConvergenceRow], mut w: impl Write) -> io::Result<()> {
    use crate::scan::format_float as f;
    writeln!(w, "L,n_max,eta,R,coefficient,analytic,rel_err")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            f(r.l),
            r.n_max,
            f(r.eta),
            f(r.r),
            f(r.coefficient),
            f(r.analytic),
            f(r.rel_err)
        )?;
    }
    Ok(())
}
