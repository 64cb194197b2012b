//! Reduced state of the two double dots and its exact evolution map.
//!
//! Entry `(s1, s2)` of the density matrix (row `s1`, column `s2`, basis
//! `|00>, |01>, |10>, |11>`) is multiplied by
//!
//! ```text
//! exp(-A (f1 C + gamma f2 S) + i A (phi1 C~ + gamma phi2 S~))
//! ```
//!
//! Since `C~ = -S~` the phase only depends on `phi1 - gamma phi2`.

use crate::kernels::{evaluate_kernels, BathKernels, KernelError, KernelPath, KernelQuery};
use crate::linalg::{self, Matrix4, ZERO};
use crate::model::{ParamError, PhysicalParams, CONSTANTS};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian: max |m - m^dagger| = {0:e}")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    Trace(f64),
    #[error("not a state: eigenvalue {0:e} is negative")]
    NotPositive(f64),
    #[error("`{name}` = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    entries: Matrix4,
}

impl DensityMatrix4 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: Matrix4) -> Result<Self, StateError> {
        let defect = linalg::hermiticity_defect(&entries);
        if !(defect <= HERMITIAN_TOL) {
            return Err(StateError::NotHermitian(defect));
        }
        let tr = linalg::trace(&entries).re;
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(StateError::Trace(tr));
        }
        let (values, _) = linalg::jacobi_eigen(&entries);
        if values[3] < -PSD_TOL {
            return Err(StateError::NotPositive(values[3]));
        }
        Ok(DensityMatrix4 { entries })
    }

    /// `|psi><psi|` for a normalized copy of `psi`.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self, StateError> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(StateError::Domain {
                name: "psi",
                value: norm,
                reason: "state vector must have a finite non-zero norm",
            });
        }
        let psi = psi.map(|z| z / norm);
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = psi[i] * psi[j].conj();
            }
        }
        Ok(DensityMatrix4 { entries: m })
    }

    /// Product of two single-qubit pure states.
    pub fn product(a: [Complex64; 2], b: [Complex64; 2]) -> Result<Self, StateError> {
        Self::pure([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    pub fn entries(&self) -> &Matrix4 {
        &self.entries
    }

    pub fn get(&self, s1: usize, s2: usize) -> Complex64 {
        self.entries[s1][s2]
    }

    /// Complex conjugate in the standard basis.
    pub fn conjugate(&self) -> Self {
        DensityMatrix4 {
            entries: linalg::conjugate(&self.entries),
        }
    }

    /// `U rho U^dagger` for a unitary `u`.
    pub fn transformed(&self, u: &Matrix4) -> Self {
        DensityMatrix4 {
            entries: linalg::mul(&linalg::mul(u, &self.entries), &linalg::adjoint(u)),
        }
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.entries).re
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.entries[i][i].re)
    }

    fn scaled(&self, factor: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = self.entries;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z *= factor(i, j);
            }
        }
        DensityMatrix4 { entries: m }
    }
}

/// Integer coupling matrices of the evolution map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingMatrices {
    pub s: [[i32; 4]; 4],
    pub c: [[i32; 4]; 4],
    pub s_tilde: [[i32; 4]; 4],
    pub c_tilde: [[i32; 4]; 4],
}

pub const COUPLING: CouplingMatrices = CouplingMatrices {
    s: [[0, 1, 1, 0], [1, 0, 4, 1], [1, 4, 0, 1], [0, 1, 1, 0]],
    c: [[0, 1, 1, 4], [1, 0, 0, 1], [1, 0, 0, 1], [4, 1, 1, 0]],
    s_tilde: [[0, -1, -1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, -1, -1, 0]],
    c_tilde: [[0, 1, 1, 0], [-1, 0, 0, -1], [-1, 0, 0, -1], [0, 1, 1, 0]],
};

/// `(|0> + |1>) (x) (|0> + |1>) / 2`: every entry equals 1/4.
pub fn initial_product_state() -> DensityMatrix4 {
    DensityMatrix4 {
        entries: [[Complex64::new(0.25, 0.0); 4]; 4],
    }
}

fn check_gamma(gamma: f64) -> Result<(), StateError> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(StateError::Domain {
            name: "gamma",
            value: gamma,
            reason: "must lie in [0, 1]",
        })
    }
}

/// Applies the exact evolution map to `rho0`.
pub fn evolve(rho0: &DensityMatrix4, k: &BathKernels, a: f64, gamma: f64) -> Result<DensityMatrix4, StateError> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(StateError::Domain {
            name: "A",
            value: a,
            reason: "must be finite and non-negative",
        });
    }
    check_gamma(gamma)?;
    let m = &COUPLING;
    let damp1 = a * k.f1;
    let damp2 = a * gamma * k.f2;
    // phi1 C~ + gamma phi2 S~ = (phi1 - gamma phi2) C~, with
    // phi1 - gamma phi2 = phi_minus + (1 - gamma) phi2.
    let phase = a * (k.phi_minus + (1.0 - gamma) * k.phi2);
    Ok(rho0.scaled(|i, j| {
        let x = damp1 * m.c[i][j] as f64 + damp2 * m.s[i][j] as f64;
        let y = phase * m.c_tilde[i][j] as f64;
        Complex64::new(-x, y).exp()
    }))
}

/// Long-time form of the map, depending only on `v` and `phi_minus`
/// (already multiplied by the prefactor `A`):
/// `exp(-(alpha0 / (6 pi)) v^2 (S + C) + i phi_minus C~)`.
pub fn asymptotic_state(
    v: f64,
    phi_minus: f64,
    rho0: &DensityMatrix4,
    alpha0: f64,
) -> Result<DensityMatrix4, StateError> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(StateError::Domain {
            name: "v",
            value: v,
            reason: "must be finite and non-negative",
        });
    }
    let m = &COUPLING;
    let kappa = alpha0 * v * v / (6.0 * PI);
    Ok(rho0.scaled(|i, j| {
        let x = kappa * (m.s[i][j] + m.c[i][j]) as f64;
        let y = phi_minus * m.c_tilde[i][j] as f64;
        Complex64::new(-x, y).exp()
    }))
}

/// Outcome of [`consistency_check_asymptotic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// Cutoff after pinning `y_max t0` to a multiple of pi.
    pub y_max: f64,
    /// Largest entrywise modulus difference between the two maps.
    pub max_difference: f64,
    pub path: KernelPath,
}

/// Compares [`evolve`] with [`asymptotic_state`] at dimensionless `t, t0`
/// (units of the thermal time) for `t >> t0 >> 1`.
pub fn consistency_check_asymptotic(params: &PhysicalParams, t: f64, t0: f64) -> Result<ConsistencyReport, StateError> {
    if params.gamma != 1.0 {
        return Err(StateError::Precondition(format!(
            "the long-time map assumes full coupling, got gamma = {}",
            params.gamma
        )));
    }
    if !(t0 >= 10.0 && t >= 100.0 * t0 && t.is_finite()) {
        return Err(StateError::Precondition(format!(
            "requires t >= 100 t0 and t0 >= 10, got t = {t}, t0 = {t0}"
        )));
    }
    let derived = params.derive_dimensionless()?;
    if derived.is_zero_temperature() {
        return Err(StateError::Precondition("requires a finite temperature".into()));
    }
    let m = (derived.y_max * t0 / PI).round().max(1.0);
    let y_max = m * PI / t0;
    let v = derived.v * y_max / derived.y_max;
    let kernels = evaluate_kernels(&KernelQuery::new(t, t0, y_max).with_cutoff(params.cutoff))?;
    let rho0 = initial_product_state();
    let exact = evolve(&rho0, &kernels, derived.a, 1.0)?;
    let asym = asymptotic_state(v, derived.a * kernels.phi_minus, &rho0, CONSTANTS.alpha0)?;
    Ok(ConsistencyReport {
        y_max,
        max_difference: linalg::max_abs_diff(exact.entries(), asym.entries()),
        path: kernels.path,
    })
}
