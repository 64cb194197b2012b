//! Small dense complex matrices and the cyclic Jacobi eigensolver.

use num_complex::Complex64;

pub type Matrix<const N: usize> = [[Complex64; N]; N];
pub type Matrix4 = Matrix<4>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

const MAX_SWEEPS: usize = 50;
const TOLERANCE: f64 = 1e-14;

pub fn identity<const N: usize>() -> Matrix<N> {
    let mut m = [[ZERO; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn from_real<const N: usize>(m: [[f64; N]; N]) -> Matrix<N> {
    m.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

pub fn mul<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    let mut c = [[ZERO; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn adjoint<const N: usize>(a: &Matrix<N>) -> Matrix<N> {
    let mut c = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            c[j][i] = a[i][j].conj();
        }
    }
    c
}

pub fn conjugate<const N: usize>(a: &Matrix<N>) -> Matrix<N> {
    a.map(|row| row.map(|z| z.conj()))
}

pub fn trace<const N: usize>(a: &Matrix<N>) -> Complex64 {
    (0..N).map(|i| a[i][i]).sum()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Largest entrywise modulus of `a - a^dagger`.
pub fn hermiticity_defect<const N: usize>(a: &Matrix<N>) -> f64 {
    max_abs_diff(a, &adjoint(a))
}

/// Kronecker product of two 2x2 matrices.
pub fn kron2(a: &Matrix<2>, b: &Matrix<2>) -> Matrix4 {
    let mut c = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    c[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    c
}

/// `V diag(d) V^dagger`.
pub fn reconstruct<const N: usize>(values: &[f64; N], vectors: &Matrix<N>) -> Matrix<N> {
    let mut c = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            c[i][j] = (0..N).map(|k| vectors[i][k] * values[k] * vectors[j][k].conj()).sum();
        }
    }
    c
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues are sorted in descending order; eigenvectors are the
/// columns of the returned unitary, each scaled so that its first non-negligible
/// component is real and positive.
pub fn jacobi_eigen<const N: usize>(m: &Matrix<N>) -> ([f64; N], Matrix<N>) {
    let mut a = *m;
    let mut v = identity::<N>();
    let norm: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= TOLERANCE * norm || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let mut values = [0.0; N];
    let mut vectors = [[ZERO; N]; N];
    for (col, &k) in order.iter().enumerate() {
        values[col] = a[k][k].re;
        let pivot = (0..N).map(|i| v[i][k]).find(|z| z.norm() > 1e-12);
        let phase = pivot.map_or(ONE, |z| z.conj() / z.norm());
        for i in 0..N {
            vectors[i][col] = v[i][k] * phase;
        }
    }
    (values, vectors)
}

fn rotate<const N: usize>(a: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let b = a[p][q];
    let mag = b.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = b / mag;
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;
    for k in 0..N {
        let (akp, akq) = (a[k][p], a[k][q]);
        a[k][p] = akp * upp + akq * uqp;
        a[k][q] = akp * upq + akq * uqq;
        let (vkp, vkq) = (v[k][p], v[k][q]);
        v[k][p] = vkp * upp + vkq * uqp;
        v[k][q] = vkp * upq + vkq * uqq;
    }
    for k in 0..N {
        let (apk, aqk) = (a[p][k], a[q][k]);
        a[p][k] = upp.conj() * apk + uqp.conj() * aqk;
        a[q][k] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p] = Complex64::new(a[p][p].re, 0.0);
    a[q][q] = Complex64::new(a[q][q].re, 0.0);
}
