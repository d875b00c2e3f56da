//! Soliton profiles `R_omega` built from the first-order identity
//! `R' = -R sqrt(omega - V(R))`, plus mass and energy by numerical quadrature.
//!
//! The profile is never marched as an ODE (the crest is a degenerate start).
//! Instead the separable identity gives the position of each amplitude,
//!
//! ```text
//! x(r) = \int_r^{T(omega)} ds / (s sqrt(omega - V(s))),
//! ```
//!
//! and after the substitutions `s = S(v) = sqrt(a v^3 + b v^2 + c v)` (so that
//! `V(s) = v`) and `v = omega - t^2` the integrand splits into the exactly
//! integrable `1/(omega - t^2)` plus the smooth rational
//! `q(v) = (2 a v + b)/(a v^2 + b v + c)`:
//!
//! ```text
//! x(v) = \int_0^tau q(omega - t^2) dt
//!        + (2 ln(sqrt(omega) + tau) - ln v) / (2 sqrt(omega)),
//! tau  = sqrt(omega - v).
//! ```
//!
//! The closed-form log term carries the entire tail, so amplitudes down to the
//! underflow floor are recovered with full relative accuracy by inverting the
//! monotone map in `ln v`.

use alloc::vec;
use alloc::vec::Vec;

use crate::nonlinearity::CubicParams;
use crate::quadrature::{composite16, gauss16};
use crate::{Error, Result};

/// Panels for the mass/energy quadratures in the `t` variable.
const MASS_ENERGY_PANELS: usize = 256;
/// Panels for the prefix table of the smooth part of `x(v)`.
const SHAPE_PANELS: usize = 64;
/// Amplitudes below this are clamped to zero.
const GRID_FLOOR: f64 = 1e-300;
/// Largest admissible `R(L)/T(omega)` before the domain is rejected.
const EDGE_TOLERANCE: f64 = 1e-6;

/// A sampled soliton profile on a symmetric grid.
///
/// `mass` and `energy` are filled by the quadratures [`mass_numeric`] and
/// [`energy_numeric`]; grid-based sums are available separately as
/// independent discretizations.
#[derive(Debug, Clone)]
pub struct Profile {
    omega: f64,
    half_count: usize,
    spacing: f64,
    xs: Vec<f64>,
    rs: Vec<f64>,
    mass: f64,
    energy: f64,
}

/// `S(v) = sqrt(a v^3 + b v^2 + c v)`, the inverse of the branch.
#[inline]
fn s_of(p: &CubicParams, v: f64) -> f64 {
    libm::sqrt(p.cubic(v))
}

/// `S'(v) = (3 a v^2 + 2 b v + c) / (2 S(v))`.
#[inline]
fn s_prime(p: &CubicParams, v: f64) -> f64 {
    p.cubic_d(v) / (2.0 * s_of(p, v))
}

/// Smooth remainder of `2 S'(v)/S(v)` after the `1/v` split.
#[inline]
fn q_smooth(p: &CubicParams, v: f64) -> f64 {
    (2.0 * p.a() * v + p.b()) / ((p.a() * v + p.b()) * v + p.c())
}

/// Monotone parametric map between amplitude (through `v = V(R)`) and
/// position, with a prefix-summed panel table for O(1) evaluations.
pub(crate) struct ShapeMap<'a> {
    p: &'a CubicParams,
    omega: f64,
    sqrt_omega: f64,
    panel_width: f64,
    prefix: Vec<f64>,
}

impl<'a> ShapeMap<'a> {
    pub(crate) fn new(p: &'a CubicParams, omega: f64) -> Self {
        let sqrt_omega = libm::sqrt(omega);
        let panel_width = sqrt_omega / SHAPE_PANELS as f64;
        let mut prefix = vec![0.0; SHAPE_PANELS + 1];
        let mut acc = 0.0;
        for i in 0..SHAPE_PANELS {
            let lo = i as f64 * panel_width;
            acc += gauss16(lo, lo + panel_width, |t| q_smooth(p, omega - t * t));
            prefix[i + 1] = acc;
        }
        Self {
            p,
            omega,
            sqrt_omega,
            panel_width,
            prefix,
        }
    }

    fn smooth_to(&self, tau: f64) -> f64 {
        let idx = libm::floor(tau / self.panel_width) as usize;
        let idx = idx.min(SHAPE_PANELS - 1);
        let lo = idx as f64 * self.panel_width;
        self.prefix[idx] + gauss16(lo, tau, |t| q_smooth(self.p, self.omega - t * t))
    }

    /// Position `x(v)` of the amplitude with `V(R) = v`.
    pub(crate) fn position_of_branch(&self, v: f64) -> f64 {
        if v >= self.omega {
            return 0.0;
        }
        let tau = libm::sqrt(self.omega - v);
        let log_term = 2.0 * libm::log(self.sqrt_omega + tau) - libm::log(v);
        self.smooth_to(tau) + log_term / (2.0 * self.sqrt_omega)
    }

    /// Inverse map: `v` with `x(v) = x`, solved as a safeguarded Newton
    /// iteration in `ln v` so the exponential tail keeps full relative
    /// accuracy. Returns 0 once the amplitude underflows the grid floor.
    pub(crate) fn branch_at_position(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.omega;
        }
        let mut y_lo = libm::log(GRID_FLOOR);
        if self.position_of_branch(GRID_FLOOR) <= x {
            return 0.0;
        }
        let mut y_hi = libm::log(self.omega);
        // asymptotic tail guess v ~ omega exp(-2 sqrt(omega) x)
        let mut y = y_hi - 2.0 * self.sqrt_omega * x;
        if !(y > y_lo && y < y_hi) {
            y = 0.5 * (y_lo + y_hi);
        }
        // converge to a couple of ulps in x: the second-difference residual
        // diagnostics divide pointwise noise by h^2, so solver slack shows up
        // much amplified on fine grids
        for _ in 0..100 {
            let v = libm::exp(y);
            let g = self.position_of_branch(v) - x;
            if g.abs() <= 2.5e-16 * (1.0 + x) {
                return v;
            }
            if g > 0.0 {
                // position too large: amplitude too small, raise v
                y_lo = y;
            } else {
                y_hi = y;
            }
            let tau = libm::sqrt(self.omega - v);
            let mut next = if tau > 0.0 {
                // d x / d ln v = -(v q(v) + 1) / (2 tau)
                y + g * 2.0 * tau / (v * q_smooth(self.p, v) + 1.0)
            } else {
                0.5 * (y_lo + y_hi)
            };
            if !(next > y_lo && next < y_hi) {
                next = 0.5 * (y_lo + y_hi);
            }
            if (next - y).abs() <= 4e-16 * (1.0 + y.abs()) {
                return libm::exp(next);
            }
            y = next;
        }
        libm::exp(y)
    }
}

/// Position `x(r) > 0` at which the profile takes the amplitude `r`.
pub fn position_of_amplitude(p: &CubicParams, omega: f64, r: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidArgument("omega must be positive and finite"));
    }
    let crest = p.crest_amplitude(omega);
    if !(r > 0.0 && r < crest) {
        return Err(Error::AmplitudeOutOfRange { r, max: crest });
    }
    let v = p.branch_root(r);
    Ok(ShapeMap::new(p, omega).position_of_branch(v))
}

/// Mass `2 \int_0^{T} s ds / sqrt(omega - V(s))` by composite Gauss-Legendre:
/// with `s = S(v)`, `v = omega - t^2` this is `4 \int_0^{sqrt(omega)}
/// S(omega - t^2) S'(omega - t^2) dt`, a smooth integrand.
pub fn mass_numeric(p: &CubicParams, omega: f64) -> f64 {
    debug_assert!(omega >= 0.0);
    if omega == 0.0 {
        return 0.0;
    }
    let rt = libm::sqrt(omega);
    4.0 * composite16(0.0, rt, MASS_ENERGY_PANELS, |t| {
        let v = omega - t * t;
        s_of(p, v) * s_prime(p, v)
    })
}

/// Energy `\int_0^{T} s sqrt(omega - V(s)) ds - \int_0^{T} s V(s) ds /
/// sqrt(omega - V(s))`, both integrals desingularized by `s = S(v)`,
/// `v = omega - t^2`.
pub fn energy_numeric(p: &CubicParams, omega: f64) -> f64 {
    debug_assert!(omega >= 0.0);
    if omega == 0.0 {
        return 0.0;
    }
    let rt = libm::sqrt(omega);
    let gradient_part = 2.0
        * composite16(0.0, rt, MASS_ENERGY_PANELS, |t| {
            let v = omega - t * t;
            s_of(p, v) * s_prime(p, v) * t * t
        });
    let potential_part = 2.0
        * composite16(0.0, rt, MASS_ENERGY_PANELS, |t| {
            let v = omega - t * t;
            s_of(p, v) * s_prime(p, v) * v
        });
    gradient_part - potential_part
}

/// Samples the profile on the symmetric grid `x_k = (k - n) L / n`,
/// `k = 0..2n`, by monotone inversion of the position map, then mirrors.
pub fn sample_profile(p: &CubicParams, omega: f64, n: usize, half_width: f64) -> Result<Profile> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidArgument("omega must be positive and finite"));
    }
    if n < 64 {
        return Err(Error::InvalidArgument(
            "grid half-count must be at least 64",
        ));
    }
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::InvalidArgument(
            "half-width must be positive and finite",
        ));
    }
    let crest = p.crest_amplitude(omega);
    let shape = ShapeMap::new(p, omega);
    let edge = s_of(p, shape.branch_at_position(half_width));
    if edge > EDGE_TOLERANCE * crest {
        return Err(Error::TruncationTooAggressive {
            edge_over_crest: edge / crest,
        });
    }

    let h = half_width / n as f64;
    let len = 2 * n + 1;
    let mut xs = vec![0.0; len];
    let mut rs = vec![0.0; len];
    for (k, x) in xs.iter_mut().enumerate() {
        *x = (k as f64 - n as f64) * h;
    }
    rs[n] = crest;
    for k in 1..=n {
        let v = shape.branch_at_position(k as f64 * h);
        let r = s_of(p, v);
        let r = if r < GRID_FLOOR { 0.0 } else { r };
        rs[n + k] = r;
        rs[n - k] = r;
    }

    Ok(Profile {
        omega,
        half_count: n,
        spacing: h,
        xs,
        rs,
        mass: mass_numeric(p, omega),
        energy: energy_numeric(p, omega),
    })
}

impl Profile {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_width(&self) -> f64 {
        self.half_count as f64 * self.spacing
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn rs(&self) -> &[f64] {
        &self.rs
    }

    /// Crest value `R(0)`; equals `T(omega)` by construction.
    pub fn crest(&self) -> f64 {
        self.rs[self.half_count]
    }

    /// Mass from the s-space quadrature.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Energy from the s-space quadrature.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Trapezoid mass on the grid; an independent discretization of the same
    /// functional as [`Profile::mass`].
    pub fn grid_mass(&self) -> f64 {
        let sq: f64 = self.rs.iter().map(|r| r * r).sum();
        let ends = 0.5
            * (self.rs[0] * self.rs[0] + self.rs[self.rs.len() - 1] * self.rs[self.rs.len() - 1]);
        self.spacing * (sq - ends)
    }

    /// Trapezoid energy on the grid with a fourth-order discrete derivative.
    pub fn grid_energy(&self, p: &CubicParams) -> f64 {
        let rs = &self.rs;
        let m = rs.len();
        let h = self.spacing;
        let deriv = |j: usize| -> f64 {
            if j >= 2 && j + 2 < m {
                (8.0 * (rs[j + 1] - rs[j - 1]) - (rs[j + 2] - rs[j - 2])) / (12.0 * h)
            } else if j >= 1 && j + 1 < m {
                (rs[j + 1] - rs[j - 1]) / (2.0 * h)
            } else if j == 0 {
                (-3.0 * rs[0] + 4.0 * rs[1] - rs[2]) / (2.0 * h)
            } else {
                (3.0 * rs[m - 1] - 4.0 * rs[m - 2] + rs[m - 3]) / (2.0 * h)
            }
        };
        let mut acc = 0.0;
        for (j, &r) in rs.iter().enumerate() {
            let d = deriv(j);
            let val = 0.5 * d * d + p.nonlinear_term(r).g;
            let w = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
            acc += w * val;
        }
        h * acc
    }

    /// Sup norm of the discrete second-difference residual of
    /// `R'' - G'(R) - omega R = 0` over interior nodes.
    pub fn elliptic_residual(&self, p: &CubicParams) -> f64 {
        let rs = &self.rs;
        let h2 = self.spacing * self.spacing;
        let mut worst = 0.0_f64;
        for j in 1..rs.len() - 1 {
            let second = (rs[j + 1] - 2.0 * rs[j] + rs[j - 1]) / h2;
            let res = second - p.nonlinear_term(rs[j]).g1 - self.omega * rs[j];
            worst = worst.max(res.abs());
        }
        worst
    }

    /// Sup norm of `(R')^2 - R^2 (omega - V(R))` with a fourth-order discrete
    /// derivative.
    pub fn first_order_residual(&self, p: &CubicParams) -> f64 {
        let rs = &self.rs;
        let h = self.spacing;
        let mut worst = 0.0_f64;
        for j in 2..rs.len() - 2 {
            let d = (8.0 * (rs[j + 1] - rs[j - 1]) - (rs[j + 2] - rs[j - 2])) / (12.0 * h);
            let res = d * d - rs[j] * rs[j] * (self.omega - p.branch(rs[j]).v);
            worst = worst.max(res.abs());
        }
        worst
    }

    /// Slope of `ln R` measured between `0.7 L` and `0.9 L`; tends to
    /// `-sqrt(omega)` as the linearization takes over.
    pub fn tail_decay_slope(&self) -> f64 {
        let n = self.half_count;
        let k1 = n + (7 * n) / 10;
        let k2 = n + (9 * n) / 10;
        let (r1, r2) = (self.rs[k1], self.rs[k2]);
        debug_assert!(r1 > 0.0 && r2 > 0.0, "tail under the grid floor");
        (libm::log(r2) - libm::log(r1)) / (self.xs[k2] - self.xs[k1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> CubicParams {
        CubicParams::new(1.0, -2.0, 3.0).unwrap()
    }

    fn fig4() -> CubicParams {
        CubicParams::new(2.0, -2.0, 1.0).unwrap()
    }

    #[test]
    fn amplitude_range_is_enforced() {
        let p = fig1();
        let t = p.crest_amplitude(1.0);
        assert!(matches!(
            position_of_amplitude(&p, 1.0, t * 1.0001),
            Err(Error::AmplitudeOutOfRange { .. })
        ));
        assert!(matches!(
            position_of_amplitude(&p, 1.0, 0.0),
            Err(Error::AmplitudeOutOfRange { .. })
        ));
    }

    #[test]
    fn position_vanishes_at_the_crest() {
        let p = fig1();
        let t = p.crest_amplitude(1.0);
        let x = position_of_amplitude(&p, 1.0, t * (1.0 - 1e-12)).unwrap();
        assert!((0.0..1e-4).contains(&x), "x = {x}");
    }

    #[test]
    fn position_amplitude_round_trip() {
        let p = fig1();
        let t = p.crest_amplitude(1.0);
        let r = t / 2.0;
        let x = position_of_amplitude(&p, 1.0, r).unwrap();
        assert!(x > 0.0);
        let shape = ShapeMap::new(&p, 1.0);
        let v = shape.branch_at_position(x);
        assert!((s_of(&p, v) - r).abs() <= 1e-8 * t);
    }

    #[test]
    fn tail_positions_grow_logarithmically() {
        let p = fig1();
        let t = p.crest_amplitude(1.0);
        let x1 = position_of_amplitude(&p, 1.0, t * 1e-7).unwrap();
        let x2 = position_of_amplitude(&p, 1.0, t * 1e-6).unwrap();
        let predicted = libm::log(10.0) / libm::sqrt(1.0);
        assert!(
            ((x1 - x2) / predicted - 1.0).abs() < 0.02,
            "ratio {}",
            (x1 - x2) / predicted
        );
    }

    #[test]
    fn monotone_in_amplitude() {
        let p = fig4();
        let t = p.crest_amplitude(0.25);
        let mut last = f64::INFINITY;
        for i in 1..40 {
            let r = t * i as f64 / 40.0;
            let x = position_of_amplitude(&p, 0.25, r).unwrap();
            assert!(x < last, "x({r}) = {x} not below {last}");
            last = x;
        }
    }

    #[test]
    fn sampled_profile_shape() {
        let p = fig1();
        let prof = sample_profile(&p, 1.0, 2048, 30.0).unwrap();
        let t = p.crest_amplitude(1.0);
        assert!((prof.crest() - t).abs() <= 1e-9 * t);
        // exact even symmetry by construction
        let rs = prof.rs();
        for k in 0..rs.len() {
            assert_eq!(rs[k], rs[rs.len() - 1 - k]);
        }
        // strictly decreasing where above the floor
        for k in prof.half_count()..rs.len() - 1 {
            if rs[k + 1] > 0.0 {
                assert!(rs[k + 1] < rs[k]);
            }
        }
        assert!(rs[0] < 1e-9 * t, "edge {}", rs[0]);
        assert!((prof.tail_decay_slope() + 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_aggressive_truncation() {
        let p = fig1();
        assert!(matches!(
            sample_profile(&p, 1.0, 256, 5.0),
            Err(Error::TruncationTooAggressive { .. })
        ));
        assert!(matches!(
            sample_profile(&p, 1.0, 32, 30.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn mass_energy_limits_at_zero_frequency() {
        let p = fig4();
        assert!(mass_numeric(&p, 1e-8) < 1e-3);
        assert_eq!(mass_numeric(&p, 0.0), 0.0);
        assert!(energy_numeric(&p, 1e-8).abs() < 1e-10);
    }

    #[test]
    fn grid_energy_tracks_quadrature_energy() {
        let p = fig4();
        let prof = sample_profile(&p, 0.25, 4096, 60.0).unwrap();
        let rel = (prof.grid_energy(&p) - prof.energy()).abs() / prof.energy().abs();
        assert!(rel <= 1e-5, "rel = {rel:e}");
        let relm = (prof.grid_mass() - prof.mass()).abs() / prof.mass();
        assert!(relm <= 1e-9, "relm = {relm:e}");
    }
}
