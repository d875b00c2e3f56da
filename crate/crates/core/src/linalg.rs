//! Symmetric tridiagonal kernels for the constrained-Hessian check: LU with
//! partial pivoting, bordered solves against a projected direction, and
//! inverse iteration for the smallest-magnitude constrained eigenvalue.

use alloc::vec;
use alloc::vec::Vec;

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
pub(crate) struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let m = self.len();
        for i in 0..m {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < m {
                acc += self.off[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// LU factorization of a (general) tridiagonal matrix with partial pivoting,
/// after LAPACK's `dgttrf`/`dgtts2`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    pivot_next: Vec<bool>,
}

impl TridiagLu {
    /// Factors `A + shift I`. Returns `None` on an exactly zero pivot.
    fn new(a: &SymTridiag, shift: f64) -> Option<Self> {
        let m = a.len();
        let mut dl = a.off.clone();
        let mut d: Vec<f64> = a.diag.iter().map(|v| v + shift).collect();
        let mut du = a.off.clone();
        let mut du2 = vec![0.0; m.saturating_sub(2)];
        let mut pivot_next = vec![false; m.saturating_sub(1)];
        for i in 0..m.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return None;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < m {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                pivot_next[i] = true;
            }
        }
        if d[m - 1] == 0.0 {
            return None;
        }
        Some(Self {
            dl,
            d,
            du,
            du2,
            pivot_next,
        })
    }

    fn solve(&self, b: &mut [f64]) {
        let m = self.d.len();
        for i in 0..m - 1 {
            if self.pivot_next[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[m - 1] /= self.d[m - 1];
        if m > 1 {
            b[m - 2] = (b[m - 2] - self.du[m - 2] * b[m - 1]) / self.d[m - 2];
        }
        for i in (0..m.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

/// Smallest-magnitude eigenvalue of `P A P` restricted to the orthogonal
/// complement of the unit vector `r`, where `P = I - r r^T`.
///
/// Inverse iteration with bordered tridiagonal solves:
/// `(P A P)^{-1} b = A^{-1} b - mu A^{-1} r` with
/// `mu = (r^T A^{-1} b)/(r^T A^{-1} r)` keeps every iterate inside the
/// complement, so the trivial null direction `r` never enters.
pub(crate) fn smallest_constrained_eigenvalue(a: &SymTridiag, r_unit: &[f64]) -> f64 {
    let m = a.len();
    debug_assert_eq!(r_unit.len(), m);
    let scale = a.diag.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));

    let mut lu = None;
    for rel_shift in [0.0, 1e-13, 1e-12, 1e-11] {
        if let Some(f) = TridiagLu::new(a, scale * rel_shift) {
            lu = Some(f);
            break;
        }
    }
    let lu = lu.expect("tridiagonal factorization failed at every shift");

    let mut u = r_unit.to_vec();
    lu.solve(&mut u);
    let denom = dot(r_unit, &u);

    // deterministic start, projected into the complement of r
    let mut x: Vec<f64> = (0..m)
        .map(|i| {
            let mut z = (i as u64)
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(0x2545_f491_4f6c_dd1d);
            z ^= z >> 31;
            (z as f64) / (u64::MAX as f64) - 0.5
        })
        .collect();
    let proj = dot(r_unit, &x);
    for (xi, ri) in x.iter_mut().zip(r_unit) {
        *xi -= proj * ri;
    }
    let n0 = norm(&x);
    for xi in x.iter_mut() {
        *xi /= n0;
    }

    let mut scratch = vec![0.0; m];
    let mut rho_prev = f64::INFINITY;
    let mut rho = 0.0;
    for _ in 0..500 {
        let mut y = x.clone();
        lu.solve(&mut y);
        let mu = dot(r_unit, &y) / denom;
        for (yi, ui) in y.iter_mut().zip(&u) {
            *yi -= mu * ui;
        }
        // clean residual drift off the constraint direction
        let drift = dot(r_unit, &y);
        for (yi, ri) in y.iter_mut().zip(r_unit) {
            *yi -= drift * ri;
        }
        let ny = norm(&y);
        if !ny.is_finite() || ny <= 0.0 {
            break;
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / ny;
        }
        a.apply(&x, &mut scratch);
        rho = dot(&x, &scratch);
        if (rho - rho_prev).abs() <= 1e-13 * rho.abs().max(1e-300) {
            break;
        }
        rho_prev = rho;
    }
    rho.abs()
}
