//! Wootters concurrence and entanglement of formation.
//!
//! With `rho = V L V^dagger`, the square roots of the eigenvalues of
//! `rho rho~` are the singular values of `N = sqrt(L) W sqrt(L)`, where
//! `W = V^dagger (sy x sy) V*`. They are read off the Hermitian embedding
//! `[[0, N], [N^dagger, 0]]`, whose spectrum is `{+s_i, -s_i}`. Working with
//! singular values avoids square roots of eigenvalues that are pure rounding
//! residue.

use crate::linalg::{self, Matrix, Matrix4, ZERO};
use crate::specialfn::binary_entropy;
use crate::twoqubit::{DensityMatrix4, StateError};
use num_complex::Complex64;

/// Eigenvalues of a state below this are treated as exact zeros.
const RANK_THRESHOLD: f64 = 1e-13;
/// Most negative eigenvalue tolerated by [`psd_sqrt`].
const NEGATIVE_LIMIT: f64 = -1e-8;

/// `sigma_y (x) sigma_y` in the basis `|00>, |01>, |10>, |11>`.
pub const SIGMA_YY: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecomposition {
    /// Descending.
    pub eigenvalues: [f64; 4],
    /// Eigenvectors as columns.
    pub eigenvectors: Matrix4,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> Matrix4 {
        linalg::reconstruct(&self.eigenvalues, &self.eigenvectors)
    }
}

pub fn hermitian_eigen(m: &Matrix4) -> Result<SpectralDecomposition, StateError> {
    let defect = linalg::hermiticity_defect(m);
    if !(defect <= 1e-10) {
        return Err(StateError::NotHermitian(defect));
    }
    let (eigenvalues, eigenvectors) = linalg::jacobi_eigen(m);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn checked_spectrum(rho: &DensityMatrix4) -> Result<SpectralDecomposition, StateError> {
    let spec = hermitian_eigen(rho.entries())?;
    if spec.eigenvalues[3] < NEGATIVE_LIMIT {
        return Err(StateError::NotPositive(spec.eigenvalues[3]));
    }
    Ok(spec)
}

/// Hermitian positive square root.
pub fn psd_sqrt(rho: &DensityMatrix4) -> Result<Matrix4, StateError> {
    let spec = checked_spectrum(rho)?;
    let roots = spec.eigenvalues.map(|l| l.max(0.0).sqrt());
    Ok(linalg::reconstruct(&roots, &spec.eigenvectors))
}

/// `(sy x sy) rho* (sy x sy)`.
pub fn spin_flip(rho: &DensityMatrix4) -> Matrix4 {
    let y = linalg::from_real(SIGMA_YY);
    linalg::mul(&linalg::mul(&y, &linalg::conjugate(rho.entries())), &y)
}

/// Square roots of the eigenvalues of `rho rho~`, descending.
pub fn wootters_values(rho: &DensityMatrix4) -> Result<[f64; 4], StateError> {
    let spec = checked_spectrum(rho)?;
    let v = &spec.eigenvectors;
    let s = spec
        .eigenvalues
        .map(|l| if l < RANK_THRESHOLD { 0.0 } else { l.sqrt() });
    let w = linalg::mul(
        &linalg::mul(&linalg::adjoint(v), &linalg::from_real(SIGMA_YY)),
        &linalg::conjugate(v),
    );
    let mut embed: Matrix<8> = [[ZERO; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let n = w[i][j] * (s[i] * s[j]);
            embed[i][4 + j] = n;
            embed[4 + j][i] = n.conj();
        }
    }
    let (vals, _) = linalg::jacobi_eigen(&embed);
    Ok([vals[0], vals[1], vals[2], vals[3]].map(|x| x.max(0.0)))
}

/// Eigenvalues of `rho rho~`, descending.
pub fn wootters_eigenvalues(rho: &DensityMatrix4) -> Result<[f64; 4], StateError> {
    wootters_values(rho).map(|s| s.map(|x| x * x))
}

pub fn concurrence(rho: &DensityMatrix4) -> Result<f64, StateError> {
    let s = wootters_values(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// `h((1 + sqrt(1 - C^2)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    binary_entropy(x).expect("argument lies in [1/2, 1]")
}

pub fn entanglement_of_formation(rho: &DensityMatrix4) -> Result<f64, StateError> {
    concurrence(rho).map(eof_from_concurrence)
}

/// Bell state `(|00> + |11>)/sqrt(2)`.
pub fn bell_state() -> DensityMatrix4 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DensityMatrix4::pure([h, ZERO, ZERO, h]).expect("normalized")
}

/// `p |Phi+><Phi+| + (1 - p) I/4`.
pub fn werner_state(p: f64) -> Result<DensityMatrix4, StateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StateError::Domain {
            name: "p",
            value: p,
            reason: "must lie in [0, 1]",
        });
    }
    let bell = bell_state();
    let mut m = *bell.entries();
    for (i, row) in m.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z *= p;
            if i == j {
                *z += (1.0 - p) / 4.0;
            }
        }
    }
    DensityMatrix4::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sigma_yy_from_definition() {
        let sy = [[ZERO, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), ZERO]];
        let k = linalg::kron2(&sy, &sy);
        assert_eq!(k, linalg::from_real(SIGMA_YY));
    }

    #[test]
    fn eigen_examples() {
        let quarter = linalg::from_real([[0.25, 0.0, 0.0, 0.0], [0.0, 0.25, 0.0, 0.0], [0.0, 0.0, 0.25, 0.0], [
            0.0, 0.0, 0.0, 0.25,
        ]]);
        assert_eq!(hermitian_eigen(&quarter).unwrap().eigenvalues, [0.25; 4]);
        let diag = linalg::from_real([[0.1, 0.0, 0.0, 0.0], [0.0, 0.3, 0.0, 0.0], [0.0, 0.0, 0.4, 0.0], [
            0.0, 0.0, 0.0, 0.2,
        ]]);
        assert_eq!(hermitian_eigen(&diag).unwrap().eigenvalues, [0.4, 0.3, 0.2, 0.1]);
        let mut bad = diag;
        bad[0][1] = c(0.1);
        assert!(matches!(hermitian_eigen(&bad), Err(StateError::NotHermitian(_))));
    }

    #[test]
    fn square_roots() {
        let quarter = DensityMatrix4::new(linalg::from_real([
            [0.25, 0.0, 0.0, 0.0],
            [0.0, 0.25, 0.0, 0.0],
            [0.0, 0.0, 0.25, 0.0],
            [0.0, 0.0, 0.0, 0.25],
        ]))
        .unwrap();
        let r = psd_sqrt(&quarter).unwrap();
        for i in 0..4 {
            assert!((r[i][i] - c(0.5)).norm() < 1e-15);
        }
        let bell = bell_state();
        assert!(linalg::max_abs_diff(&psd_sqrt(&bell).unwrap(), bell.entries()) < 1e-14);
    }

    #[test]
    fn reference_states() {
        let bell = bell_state();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        assert!((entanglement_of_formation(&bell).unwrap() - 1.0).abs() < 1e-12);
        let product = crate::twoqubit::initial_product_state();
        assert!(concurrence(&product).unwrap() <= 1e-10);
        let w = werner_state(0.5).unwrap();
        assert!((concurrence(&w).unwrap() - 0.25).abs() < 1e-10);
        assert!((entanglement_of_formation(&w).unwrap() - 0.11762).abs() < 1e-4);
    }

    #[test]
    fn eof_endpoints() {
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
    }
}
