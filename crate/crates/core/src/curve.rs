//! Closed-form mass curve `lambda(omega)`, its slope, the energy curve
//! `e(omega)`, and the critical frequencies and levels that drive the
//! uniqueness/degeneracy classification.

use crate::nonlinearity::CubicParams;

/// Relative half-width of the band around `sigma = 2` (equivalently around a
/// vanishing discriminant `b^2 - 2ac`) inside which the curve is classified
/// as having the single degenerate frequency.
pub const SIGMA_BAND: f64 = 1e-9;

/// Critical frequencies and levels of the mass curve.
///
/// In the multiplicity regime the curve rises to a local maximum
/// `lambda_max = lambda(omega_m)`, falls to a local minimum
/// `lambda_min = lambda(omega_M)` and rises again; both extrema are absent
/// when the slope never vanishes, and they merge into the single degenerate
/// frequency `omega_d = -b/(4a)` on the `sigma = 2` band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaCurve {
    params: CubicParams,
    omega_m: Option<f64>,
    omega_max: Option<f64>,
    omega_d: Option<f64>,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_d: Option<f64>,
}

/// Shape-ratio regime of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `lambda` strictly increasing: a unique nondegenerate minimizer at
    /// every level. Also covers every `b >= 0` nonlinearity.
    UniqueNondegenerate,
    /// `sigma = 2` (within the band) with `b < 0`: unique minimizers, all
    /// degenerate at the single level `lambda(omega_d)`.
    UniqueDegenerateLevel,
    /// `2 < sigma < 3` with `b < 0`: a window of levels with three branch
    /// frequencies and one level carrying two minimizers.
    MultiplicityWindow,
}

impl Regime {
    /// Classifies by `sigma` with the `|sigma - 2| <= 1e-9` band; `b >= 0`
    /// always lands in the strictly increasing regime since the slope's
    /// quadratic then has no positive root.
    pub fn classify(p: &CubicParams) -> Regime {
        if p.b() >= 0.0 {
            return Regime::UniqueNondegenerate;
        }
        let sigma = p.sigma();
        if (sigma - 2.0).abs() <= SIGMA_BAND {
            Regime::UniqueDegenerateLevel
        } else if sigma > 2.0 {
            Regime::MultiplicityWindow
        } else {
            Regime::UniqueNondegenerate
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::UniqueNondegenerate => "unique-nondegenerate",
            Regime::UniqueDegenerateLevel => "unique-degenerate-level",
            Regime::MultiplicityWindow => "multiplicity-window",
        }
    }
}

/// `lambda(omega) = (16a/5) w^{5/2} + (8b/3) w^{3/2} + 2c w^{1/2}`.
pub fn mass_closed(p: &CubicParams, omega: f64) -> f64 {
    debug_assert!(omega >= 0.0, "mass_closed requires omega >= 0");
    if omega == 0.0 {
        return 0.0;
    }
    let poly = (16.0 * p.a() / 5.0) * omega * omega + (8.0 * p.b() / 3.0) * omega + 2.0 * p.c();
    poly * libm::sqrt(omega)
}

/// `lambda'(omega) = (8a w^2 + 4b w + c) / sqrt(w)`; diverges at `omega = 0`.
pub fn mass_slope(p: &CubicParams, omega: f64) -> f64 {
    assert!(
        omega > 0.0,
        "mass_slope requires omega > 0 (the closed form diverges at 0)"
    );
    slope_quadratic(p, omega) / libm::sqrt(omega)
}

/// The quadratic `8a w^2 + 4b w + c` whose positive roots are the critical
/// frequencies.
#[inline]
pub(crate) fn slope_quadratic(p: &CubicParams, omega: f64) -> f64 {
    (8.0 * p.a() * omega + 4.0 * p.b()) * omega + p.c()
}

/// `e(omega)`: the antiderivative of `-(omega/2) lambda'(omega)` vanishing at
/// zero, `-((16a/7) w^{7/2} + (8b/5) w^{5/2} + (2c/3) w^{3/2}) / 2`.
pub fn energy_closed(p: &CubicParams, omega: f64) -> f64 {
    debug_assert!(omega >= 0.0, "energy_closed requires omega >= 0");
    if omega == 0.0 {
        return 0.0;
    }
    let poly =
        (16.0 * p.a() / 7.0) * omega * omega + (8.0 * p.b() / 5.0) * omega + 2.0 * p.c() / 3.0;
    -0.5 * poly * omega * libm::sqrt(omega)
}

/// Antiderivative `Lambda(omega)` of the mass curve, used by the equal-area
/// construction: `(32a/35) w^{7/2} + (16b/15) w^{5/2} + (4c/3) w^{3/2}`.
pub fn mass_antiderivative(p: &CubicParams, omega: f64) -> f64 {
    debug_assert!(omega >= 0.0);
    if omega == 0.0 {
        return 0.0;
    }
    let poly =
        (32.0 * p.a() / 35.0) * omega * omega + (16.0 * p.b() / 15.0) * omega + 4.0 * p.c() / 3.0;
    poly * omega * libm::sqrt(omega)
}

/// Locates the roots of the slope quadratic and fills the associated levels.
pub fn critical_frequencies(p: &CubicParams) -> LambdaCurve {
    let mut curve = LambdaCurve {
        params: *p,
        omega_m: None,
        omega_max: None,
        omega_d: None,
        lambda_min: None,
        lambda_max: None,
        lambda_d: None,
    };
    if p.b() >= 0.0 {
        return curve;
    }
    let (a, b, c) = (p.a(), p.b(), p.c());
    let disc = b * b - 2.0 * a * c;
    if disc.abs() <= SIGMA_BAND * a * c {
        let omega_d = -b / (4.0 * a);
        curve.omega_d = Some(omega_d);
        curve.lambda_d = Some(mass_closed(p, omega_d));
    } else if disc > 0.0 {
        let root = libm::sqrt(disc);
        let omega_m = (-b - root) / (4.0 * a);
        let omega_max = (-b + root) / (4.0 * a);
        curve.omega_m = Some(omega_m);
        curve.omega_max = Some(omega_max);
        curve.lambda_max = Some(mass_closed(p, omega_m));
        curve.lambda_min = Some(mass_closed(p, omega_max));
    }
    curve
}

impl LambdaCurve {
    pub fn params(&self) -> &CubicParams {
        &self.params
    }

    /// Lower critical frequency (the local maximum of the curve).
    pub fn omega_m(&self) -> Option<f64> {
        self.omega_m
    }

    /// Upper critical frequency (the local minimum of the curve).
    pub fn omega_big_m(&self) -> Option<f64> {
        self.omega_max
    }

    /// Degenerate frequency `-b/(4a)`, present only on the `sigma = 2` band.
    pub fn omega_d(&self) -> Option<f64> {
        self.omega_d
    }

    /// Lower window level `lambda(omega_M)`.
    pub fn lambda_m(&self) -> Option<f64> {
        self.lambda_min
    }

    /// Upper window level `lambda(omega_m)`.
    pub fn lambda_big_m(&self) -> Option<f64> {
        self.lambda_max
    }

    /// Level of the degenerate minimizer.
    pub fn lambda_d(&self) -> Option<f64> {
        self.lambda_d
    }

    /// The open window `(lambda_m, lambda_M)` when it exists.
    pub fn window(&self) -> Option<(f64, f64)> {
        Some((self.lambda_min?, self.lambda_max?))
    }
}
