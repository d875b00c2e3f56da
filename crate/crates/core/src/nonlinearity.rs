//! The increasing branch `V(s)` of the implicit cubic `s^2 = a V^3 + b V^2 + c V`
//! and the induced nonlinearity `G(s) = -s^2 V(s) / 2` with two derivatives.
//!
//! Under `a, c > 0` and `sigma = b^2/(ac) < 3` the cubic is strictly increasing
//! in `V` (its derivative `3a V^2 + 2b V + c` has negative discriminant), so the
//! branch is single-valued on all of `[0, inf)` and bracketed root-solving is
//! safe everywhere.

use crate::{Error, Result};

/// Validated coefficient triple of the defining cubic, with the shape ratio
/// `sigma = b^2 / (a c)`. The single source of truth for the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicParams {
    a: f64,
    b: f64,
    c: f64,
    sigma: f64,
}

/// Branch value `V(s)` with first and second derivatives in `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchValue {
    pub v: f64,
    pub v1: f64,
    pub v2: f64,
}

/// `G`, `G'` and `G''` at one amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearTerm {
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

impl CubicParams {
    /// Validates `(a, b, c)`: requires `a > 0`, `c > 0` and `sigma < 3`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 || !c.is_finite() || c <= 0.0 {
            return Err(Error::CoefficientSign { a, c });
        }
        let sigma = b * b / (a * c);
        if sigma.is_nan() || sigma >= 3.0 {
            return Err(Error::BranchNotExtendable { sigma });
        }
        Ok(Self { a, b, c, sigma })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The cubic `a v^3 + b v^2 + c v`.
    #[inline]
    pub(crate) fn cubic(&self, v: f64) -> f64 {
        ((self.a * v + self.b) * v + self.c) * v
    }

    /// Derivative of the cubic, `3a v^2 + 2b v + c`; strictly positive.
    #[inline]
    pub(crate) fn cubic_d(&self, v: f64) -> f64 {
        (3.0 * self.a * v + 2.0 * self.b) * v + self.c
    }

    /// Root of `a v^3 + b v^2 + c v = s^2`, without derivatives.
    ///
    /// Safeguarded Newton on the bracket `(0, hi]` where `hi` starts at
    /// `s^2/c + 1` and doubles until the cubic exceeds `s^2`. Mixed
    /// absolute/relative tolerance `1e-13` on the root with a 60-iteration cap
    /// and bisection fallback whenever a Newton step leaves the bracket.
    pub(crate) fn branch_root(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0);
        let s2 = s * s;
        if s2 == 0.0 {
            return 0.0;
        }
        let mut hi = s2 / self.c + 1.0;
        while self.cubic(hi) < s2 {
            hi *= 2.0;
        }
        let mut lo = 0.0_f64;
        // cv <= cubic(v) is false for b < 0, but s^2/c stays a usable seed.
        let mut v = (s2 / self.c).min(hi);
        if v <= lo || v >= hi {
            v = 0.5 * hi;
        }
        for _ in 0..60 {
            let f = self.cubic(v) - s2;
            if f > 0.0 {
                hi = v;
            } else if f < 0.0 {
                lo = v;
            } else {
                return v;
            }
            if f.abs() <= 1e-15 * if s2 > 1.0 { s2 } else { 1.0 } {
                return v;
            }
            let step = f / self.cubic_d(v);
            let mut next = v - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - v).abs() <= 1e-13 * (1.0 + v.abs()) {
                return next;
            }
            v = next;
        }
        v
    }

    /// Evaluates the branch `V(s)` with its first two derivatives.
    ///
    /// At `s = 0` the analytic limits `(0, 0, 2/c)` are returned directly.
    /// Away from zero, `V' = 2s / (3aV^2 + 2bV + c)` and
    /// `V'' = (2 - (6aV + 2b) V'^2) / (3aV^2 + 2bV + c)`.
    pub fn branch(&self, s: f64) -> BranchValue {
        debug_assert!(s >= 0.0, "branch requires s >= 0");
        if s == 0.0 {
            return BranchValue {
                v: 0.0,
                v1: 0.0,
                v2: 2.0 / self.c,
            };
        }
        let v = self.branch_root(s);
        let den = self.cubic_d(v);
        let v1 = 2.0 * s / den;
        let v2 = (2.0 - (6.0 * self.a * v + 2.0 * self.b) * v1 * v1) / den;
        BranchValue { v, v1, v2 }
    }

    /// Crest amplitude `T(omega) = sqrt(a w^3 + b w^2 + c w)`, the inverse of
    /// the branch: `V(T(omega)) = omega`.
    pub fn crest_amplitude(&self, omega: f64) -> f64 {
        debug_assert!(omega >= 0.0, "crest_amplitude requires omega >= 0");
        libm::sqrt(self.cubic(omega))
    }

    /// `G(s) = -s^2 V / 2` with `G' = -(2sV + s^2 V')/2` and
    /// `G'' = -(2V + 4sV' + s^2 V'')/2`.
    pub fn nonlinear_term(&self, s: f64) -> NonlinearTerm {
        if s == 0.0 {
            return NonlinearTerm {
                g: 0.0,
                g1: 0.0,
                g2: 0.0,
            };
        }
        let BranchValue { v, v1, v2 } = self.branch(s);
        NonlinearTerm {
            g: -0.5 * s * s * v,
            g1: -0.5 * (2.0 * s * v + s * s * v1),
            g2: -0.5 * (2.0 * v + 4.0 * s * v1 + s * s * v2),
        }
    }

    /// Phase-rotation multiplier `W(s) = G'(s)/s = -(2V + sV')/2`, extended by
    /// `W(0) = G''(0) = 0` (removable singularity).
    pub fn phase_multiplier(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let BranchValue { v, v1, .. } = self.branch(s);
        -0.5 * (2.0 * v + s * v1)
    }

    /// Same as [`phase_multiplier`](Self::phase_multiplier) but warm-started
    /// from a previous root guess; returns `(W, v)` so callers can cache `v`.
    pub(crate) fn phase_multiplier_cached(&self, s: f64, v_guess: f64) -> (f64, f64) {
        if s == 0.0 {
            return (0.0, 0.0);
        }
        let s2 = s * s;
        let mut v = if v_guess > 0.0 { v_guess } else { s2 / self.c };
        let tol = 1e-15 * if s2 > 1.0 { s2 } else { 1.0 };
        let mut ok = false;
        for _ in 0..8 {
            let f = self.cubic(v) - s2;
            if f.abs() <= tol {
                ok = true;
                break;
            }
            let next = v - f / self.cubic_d(v);
            if !next.is_finite() || next <= 0.0 {
                break;
            }
            if (next - v).abs() <= 1e-14 * (1.0 + v.abs()) {
                v = next;
                ok = true;
                break;
            }
            v = next;
        }
        if !ok {
            v = self.branch_root(s);
        }
        let v1 = 2.0 * s / self.cubic_d(v);
        (-0.5 * (2.0 * v + s * v1), v)
    }
}
