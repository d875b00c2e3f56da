//! Classification of constrained minimizers at a mass level: branch
//! frequencies, equal-area functions, the multiplicity level, minimizer
//! count and degeneracy, plus an independent finite-difference check of the
//! constrained Hessian.

use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{
    self, critical_frequencies, energy_closed, mass_antiderivative, mass_closed, mass_slope,
};
use crate::linalg::{smallest_constrained_eigenvalue, SymTridiag};
use crate::nonlinearity::CubicParams;
use crate::profile::sample_profile;
use crate::{Error, Result};

/// A branch slope vanishing below this (in absolute value) marks the
/// frequency as a degenerate minimizer.
pub const DEGENERACY_SLOPE_TOLERANCE: f64 = 1e-10;
/// A level within this relative distance of `lambda_2` counts as the
/// two-minimizer level.
pub const LAMBDA2_BAND: f64 = 1e-9;
/// Relative band for snapping a level onto a window boundary.
const BOUNDARY_BAND: f64 = 1e-12;

/// One solution of `lambda(omega) = lambda`, tagged with the branch interval
/// that localizes it: 1 on `(0, omega_m]`, 2 on `(omega_m, omega_M]`, 3 on
/// `(omega_M, inf)`. A merged double root carries the lower adjacent index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchRoot {
    pub index: u8,
    pub omega: f64,
}

/// Report for one mass level.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub level: f64,
    pub sigma: f64,
    pub regime: curve::Regime,
    pub branch_freqs: Vec<BranchRoot>,
    /// `(g1, g2)` when the level sits inside the multiplicity window.
    pub areas: Option<(f64, f64)>,
    /// Closed-form energies, aligned with `branch_freqs`.
    pub energies: Vec<f64>,
    pub minimizer_count: u8,
    pub minimizing_branches: Vec<u8>,
    /// Degeneracy flags aligned with `branch_freqs`.
    pub degenerate: Vec<bool>,
    pub lambda2: Option<f64>,
    /// Raw distance `|lambda - lambda2|` when `lambda2` exists.
    pub lambda2_distance: Option<f64>,
}

/// Outcome of the discretized constrained-Hessian probe.
#[derive(Debug, Clone, Copy)]
pub struct HessianCheck {
    pub omega: f64,
    /// Requested half-count; the probe also runs with `2n` for refinement.
    pub half_count: usize,
    pub half_width: f64,
    /// Spacing of the finer grid.
    pub spacing: f64,
    /// Smallest constrained singular value on the finer grid.
    pub sigma_min: f64,
    /// Smallest constrained singular value on the requested grid.
    pub sigma_min_coarse: f64,
    /// `sigma_min / sigma_min_coarse`; a true kernel shrinks by about 1/4
    /// per refinement, a spectral-gap floor stays put.
    pub refinement_ratio: f64,
    pub degenerate: bool,
}

/// Monotone solve of `mass_closed(omega) = lambda` on a bracket where the
/// curve is strictly monotone; Newton guarded by bisection.
fn solve_on_bracket(p: &CubicParams, lambda: f64, mut lo: f64, mut hi: f64) -> f64 {
    let increasing = mass_closed(p, hi) >= mass_closed(p, lo);
    let mut w = 0.5 * (lo + hi);
    // run to bracket collapse: near a critical frequency the curve has a
    // vanishing slope and a small residual alone leaves omega poorly pinned
    for _ in 0..200 {
        let f = mass_closed(p, w) - lambda;
        if f == 0.0 {
            return w;
        }
        if (f > 0.0) == increasing {
            hi = w;
        } else {
            lo = w;
        }
        let slope = mass_slope(p, w);
        let mut next = if slope != 0.0 {
            w - f / slope
        } else {
            0.5 * (lo + hi)
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - w).abs() <= 2e-16 * w.abs() || hi - lo <= 4e-16 * hi {
            return next;
        }
        w = next;
    }
    w
}

/// Bracket the single crossing of a strictly increasing stretch of the curve
/// starting from a seed frequency.
fn expand_bracket_up(p: &CubicParams, lambda: f64, seed: f64) -> (f64, f64) {
    let mut hi = seed;
    while mass_closed(p, hi) < lambda {
        hi *= 2.0;
    }
    let mut lo = seed.min(hi) * 0.5;
    while mass_closed(p, lo) > lambda {
        lo *= 0.5;
        assert!(lo > 1e-300, "bracket collapse while expanding down");
    }
    (lo, hi)
}

/// All frequencies with `lambda(omega) = lambda`, localized by branch.
pub fn branch_frequencies(p: &CubicParams, lambda: f64) -> Result<Vec<BranchRoot>> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLevel { lambda });
    }
    let crit = critical_frequencies(p);
    let Some((lambda_min, lambda_max)) = crit.window() else {
        // strictly non-decreasing curve (possibly with one flat inflection)
        let (lo, hi) = expand_bracket_up(p, lambda, 1.0);
        let w = solve_on_bracket(p, lambda, lo, hi);
        return Ok(vec![BranchRoot { index: 1, omega: w }]);
    };
    let omega_m = crit.omega_m().expect("window implies omega_m");
    let omega_mm = crit.omega_big_m().expect("window implies omega_M");
    let band = BOUNDARY_BAND * lambda_max.max(1.0);

    if lambda > lambda_max + band {
        let (_, hi) = expand_bracket_up(p, lambda, omega_mm * 2.0);
        let w = solve_on_bracket(p, lambda, omega_mm, hi);
        return Ok(vec![BranchRoot { index: 3, omega: w }]);
    }
    if lambda < lambda_min - band {
        let mut lo = omega_m * 0.5;
        while mass_closed(p, lo) > lambda {
            lo *= 0.5;
        }
        let w = solve_on_bracket(p, lambda, lo, omega_m);
        return Ok(vec![BranchRoot { index: 1, omega: w }]);
    }
    if (lambda - lambda_max).abs() <= band {
        // double root at the local maximum, plus the outer rising branch
        let (_, hi) = expand_bracket_up(p, lambda, omega_mm * 2.0);
        let w3 = solve_on_bracket(p, lambda, omega_mm, hi);
        return Ok(vec![
            BranchRoot {
                index: 1,
                omega: omega_m,
            },
            BranchRoot {
                index: 3,
                omega: w3,
            },
        ]);
    }
    if (lambda - lambda_min).abs() <= band {
        // double root at the local minimum, plus the inner rising branch
        let mut lo = omega_m * 0.5;
        while mass_closed(p, lo) > lambda {
            lo *= 0.5;
        }
        let w1 = solve_on_bracket(p, lambda, lo, omega_m);
        return Ok(vec![
            BranchRoot {
                index: 1,
                omega: w1,
            },
            BranchRoot {
                index: 2,
                omega: omega_mm,
            },
        ]);
    }

    let mut lo = omega_m * 0.5;
    while mass_closed(p, lo) > lambda {
        lo *= 0.5;
    }
    let w1 = solve_on_bracket(p, lambda, lo, omega_m);
    let w2 = solve_on_bracket(p, lambda, omega_m, omega_mm);
    let (_, hi) = expand_bracket_up(p, lambda, omega_mm * 2.0);
    let w3 = solve_on_bracket(p, lambda, omega_mm, hi);
    Ok(vec![
        BranchRoot {
            index: 1,
            omega: w1,
        },
        BranchRoot {
            index: 2,
            omega: w2,
        },
        BranchRoot {
            index: 3,
            omega: w3,
        },
    ])
}

/// The three branch frequencies for a level inside the closed window, with
/// merged endpoints at the boundaries.
fn window_triple(p: &CubicParams, lambda: f64) -> Result<(f64, f64, f64)> {
    let crit = critical_frequencies(p);
    let Some((lambda_min, lambda_max)) = crit.window() else {
        return Err(Error::NoMultiplicityWindow { sigma: p.sigma() });
    };
    if !(lambda >= lambda_min - BOUNDARY_BAND * lambda_max
        && lambda <= lambda_max * (1.0 + BOUNDARY_BAND))
    {
        return Err(Error::OutsideWindow {
            lambda,
            lambda_min,
            lambda_max,
        });
    }
    let roots = branch_frequencies(p, lambda)?;
    let omega_m = crit.omega_m().expect("window implies omega_m");
    let omega_mm = crit.omega_big_m().expect("window implies omega_M");
    Ok(match roots.len() {
        3 => (roots[0].omega, roots[1].omega, roots[2].omega),
        2 if roots[1].index == 3 => (omega_m, omega_m, roots[1].omega),
        2 => (roots[0].omega, omega_mm, omega_mm),
        _ => {
            return Err(Error::OutsideWindow {
                lambda,
                lambda_min,
                lambda_max,
            })
        }
    })
}

/// Equal-area functions `g1(lambda)`, `g2(lambda)` from the exact
/// antiderivative of the mass curve.
pub fn equal_area(p: &CubicParams, lambda: f64) -> Result<(f64, f64)> {
    let (w1, w2, w3) = window_triple(p, lambda)?;
    let g1 = mass_antiderivative(p, w2) - mass_antiderivative(p, w1) - lambda * (w2 - w1);
    let g2 = lambda * (w3 - w2) - (mass_antiderivative(p, w3) - mass_antiderivative(p, w2));
    Ok((g1.max(0.0), g2.max(0.0)))
}

/// The unique level with two minimizers: the root of the strictly increasing
/// `g2 - g1` on the window, found by bisection run to machine precision.
pub fn multiplicity_level(p: &CubicParams) -> Result<f64> {
    let crit = critical_frequencies(p);
    let Some((mut lo, mut hi)) = crit.window() else {
        return Err(Error::NoMultiplicityWindow { sigma: p.sigma() });
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g1, g2) = equal_area(p, mid)?;
        if g2 == g1 {
            return Ok(mid);
        }
        if g2 < g1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Full classification of the minimizers at one level.
pub fn classify(p: &CubicParams, lambda: f64) -> Result<ClassificationReport> {
    let branch_freqs = branch_frequencies(p, lambda)?;
    let regime = curve::Regime::classify(p);
    let energies: Vec<f64> = branch_freqs
        .iter()
        .map(|r| energy_closed(p, r.omega))
        .collect();
    let degenerate: Vec<bool> = branch_freqs
        .iter()
        .map(|r| mass_slope(p, r.omega).abs() <= DEGENERACY_SLOPE_TOLERANCE)
        .collect();

    let lambda2 = if regime == curve::Regime::MultiplicityWindow {
        Some(multiplicity_level(p)?)
    } else {
        None
    };
    let lambda2_distance = lambda2.map(|l2| (lambda - l2).abs());
    let areas = if lambda2.is_some() {
        equal_area(p, lambda).ok()
    } else {
        None
    };

    let (minimizer_count, minimizing_branches) = match (lambda2, branch_freqs.len()) {
        (Some(l2), len) if len > 1 => {
            if (lambda - l2).abs() <= LAMBDA2_BAND * l2 {
                (2, vec![1, 3])
            } else if lambda < l2 {
                (1, vec![1])
            } else {
                (1, vec![branch_freqs.last().expect("nonempty").index])
            }
        }
        _ => (1, vec![branch_freqs[0].index]),
    };

    Ok(ClassificationReport {
        level: lambda,
        sigma: p.sigma(),
        regime,
        branch_freqs,
        areas,
        energies,
        minimizer_count,
        minimizing_branches,
        degenerate,
        lambda2,
        lambda2_distance,
    })
}

/// Builds the even-restricted operator `f -> -f'' + (G''(R) + omega) f` on
/// the half grid `x_0 = 0 .. x_{m-1} = L - h` (Dirichlet at `L`), conjugated
/// into the natural weighted inner product so it is symmetric, together with
/// the unit constraint direction.
fn even_operator(p: &CubicParams, omega: f64, r_half: &[f64], h: f64) -> (SymTridiag, Vec<f64>) {
    let m = r_half.len();
    let inv_h2 = 1.0 / (h * h);
    let mut diag = vec![0.0; m];
    for (d, &r) in diag.iter_mut().zip(r_half) {
        *d = 2.0 * inv_h2 + p.nonlinear_term(r).g2 + omega;
    }
    let mut off = vec![-inv_h2; m - 1];
    // even reflection couples x_0 to x_1 twice; sqrt(2) restores symmetry in
    // the half-line inner product with weights (1, 2, 2, ...)
    off[0] = -core::f64::consts::SQRT_2 * inv_h2;
    let mut r_unit: Vec<f64> = r_half
        .iter()
        .map(|&r| core::f64::consts::SQRT_2 * r)
        .collect();
    r_unit[0] = r_half[0];
    let nrm = libm::sqrt(r_unit.iter().map(|v| v * v).sum::<f64>());
    for v in r_unit.iter_mut() {
        *v /= nrm;
    }
    (SymTridiag { diag, off }, r_unit)
}

/// Independent degeneracy probe: smallest singular value of the constrained,
/// even-restricted Hessian at two resolutions. Degenerate when the value both
/// shrinks under refinement (ratio below 0.6) and lands below `1e-4`.
pub fn constrained_hessian_check(
    p: &CubicParams,
    omega: f64,
    n: usize,
    half_width: f64,
) -> Result<HessianCheck> {
    let fine = sample_profile(p, omega, 2 * n, half_width)?;
    let rs = fine.rs();
    let h_fine = fine.spacing();
    // positive half without the Dirichlet endpoint
    let fine_half = &rs[2 * n..4 * n];
    let coarse_half: Vec<f64> = (0..n).map(|i| rs[2 * n + 2 * i]).collect();

    let (a_fine, r_fine) = even_operator(p, omega, fine_half, h_fine);
    let (a_coarse, r_coarse) = even_operator(p, omega, &coarse_half, 2.0 * h_fine);
    let sigma_fine = smallest_constrained_eigenvalue(&a_fine, &r_fine);
    let sigma_coarse = smallest_constrained_eigenvalue(&a_coarse, &r_coarse);
    let ratio = sigma_fine / sigma_coarse;

    Ok(HessianCheck {
        omega,
        half_count: n,
        half_width,
        spacing: h_fine,
        sigma_min: sigma_fine,
        sigma_min_coarse: sigma_coarse,
        refinement_ratio: ratio,
        degenerate: ratio < 0.6 && sigma_fine < 1e-4,
    })
}
