//! Panel-wise adaptive Gauss–Legendre quadrature for vector-valued integrands.
//!
//! The interval is cut into panels of a caller-chosen width (for oscillatory
//! integrands, half a period of the fastest oscillator). Each panel is
//! integrated with the 15-point rule on the whole panel and on its two halves;
//! the difference is the error estimate, and panels failing the tolerance are
//! bisected recursively.

use std::sync::OnceLock;

const ORDER: usize = 15;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-10, rel: 1e-10 }
    }
}

/// Result of a quadrature: one value per integrand component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    /// Sum over panels of the largest per-component estimated error.
    pub error: f64,
    pub evaluations: usize,
}

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(ORDER, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(ORDER, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// 15-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64) -> [f64; N] {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; N];
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        let v = f(mid + half * x);
        for (a, v) in acc.iter_mut().zip(v) {
            *a += w * v;
        }
    }
    acc.map(|s| s * half)
}

struct Adaptive<'a, const N: usize, F> {
    f: &'a F,
    tol: Tolerance,
    evaluations: usize,
}

impl<const N: usize, F: Fn(f64) -> [f64; N]> Adaptive<'_, N, F> {
    fn panel(&mut self, a: f64, b: f64, whole: [f64; N], depth: u32) -> ([f64; N], f64) {
        let m = 0.5 * (a + b);
        let left = gauss_legendre(self.f, a, m);
        let right = gauss_legendre(self.f, m, b);
        self.evaluations += 2 * ORDER;
        let mut fine = [0.0; N];
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..N {
            fine[i] = left[i] + right[i];
            err = err.max((fine[i] - whole[i]).abs());
            scale = scale.max(fine[i].abs());
        }
        if err <= self.tol.abs.max(self.tol.rel * scale) || depth >= MAX_DEPTH || !err.is_finite() {
            return (fine, err);
        }
        let (l, el) = self.panel(a, m, left, depth + 1);
        let (r, er) = self.panel(m, b, right, depth + 1);
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = l[i] + r[i];
        }
        (out, el + er)
    }
}

/// Integrate `f` over `[a, b]` using panels of width at most `panel_width`.
pub fn integrate_panels<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: &F,
    a: f64,
    b: f64,
    panel_width: f64,
    tol: Tolerance,
) -> Integral<N> {
    let mut value = [0.0; N];
    if !(b > a) {
        return Integral {
            value,
            error: 0.0,
            evaluations: 0,
        };
    }
    let panels = ((b - a) / panel_width).ceil().max(1.0) as usize;
    let mut state = Adaptive {
        f,
        tol,
        evaluations: 0,
    };
    let mut error = 0.0;
    for k in 0..panels {
        let lo = a + (b - a) * k as f64 / panels as f64;
        let hi = if k + 1 == panels {
            b
        } else {
            a + (b - a) * (k + 1) as f64 / panels as f64
        };
        let whole = gauss_legendre(f, lo, hi);
        state.evaluations += ORDER;
        let (v, e) = state.panel(lo, hi, whole, 0);
        for i in 0..N {
            value[i] += v[i];
        }
        error += e;
    }
    Integral {
        value,
        error,
        evaluations: state.evaluations,
    }
}

/// Scalar convenience wrapper around [`integrate_panels`].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panel_width: f64, tol: Tolerance) -> (f64, f64) {
    let r = integrate_panels(&|x| [f(x)], a, b, panel_width, tol);
    (r.value[0], r.error)
}
