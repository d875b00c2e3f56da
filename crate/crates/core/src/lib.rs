//! Standing waves of the one-dimensional nonlinear Schrödinger equation for
//! algebraic nonlinearities `G(s) = -s^2 V(s)/2`, where `V` is the increasing
//! branch of `s^2 = a V^3 + b V^2 + c V`.
//!
//! The crate evaluates the branch and its inverse, builds soliton profiles by
//! quadrature, computes the mass curve `lambda(omega)` in closed form and by
//! independent numerical integration, classifies constrained minimizers
//! (count, energy ordering, degeneracy) and probes orbital stability by
//! split-step spectral time evolution.
//!
//! `no_std` + `alloc`; all floating-point kernels go through `libm`, so
//! results are bit-reproducible across platforms.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod curve;
pub mod evolution;
mod fft;
mod linalg;
pub mod nonlinearity;
pub mod profile;
pub mod quadrature;

pub use classifier::{BranchRoot, ClassificationReport, HessianCheck};
pub use curve::{LambdaCurve, Regime};
pub use evolution::{EvolutionState, OrbitDistanceSeries, PeriodicGrid, PerturbationMode};
pub use nonlinearity::{BranchValue, CubicParams, NonlinearTerm};
pub use profile::Profile;

use core::fmt;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `a` or `c` is not strictly positive.
    CoefficientSign { a: f64, c: f64 },
    /// `sigma = b^2/(ac)` is at or above 3; the increasing branch folds and is
    /// not globally extendable.
    BranchNotExtendable { sigma: f64 },
    /// Amplitude outside `(0, T(omega))`.
    AmplitudeOutOfRange { r: f64, max: f64 },
    /// The requested half-width cuts the profile off before it has decayed.
    TruncationTooAggressive { edge_over_crest: f64 },
    /// A scalar or grid argument violates a precondition.
    InvalidArgument(&'static str),
    /// Nonpositive mass level.
    InvalidLevel { lambda: f64 },
    /// Equal-area machinery requested outside the multiplicity regime.
    NoMultiplicityWindow { sigma: f64 },
    /// Mass level outside `[lambda_m, lambda_M]`.
    OutsideWindow {
        lambda: f64,
        lambda_min: f64,
        lambda_max: f64,
    },
    /// Field and profile grids do not match.
    IncompatibleGrids,
    /// Non-finite field values during time evolution.
    BlowUp { t: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CoefficientSign { a, c } => {
                write!(
                    f,
                    "coefficient sign violation: need a > 0 and c > 0, got a = {a}, c = {c}"
                )
            }
            Error::BranchNotExtendable { sigma } => {
                write!(
                    f,
                    "branch not globally extendable: σ = {sigma:.4} (admissible range: σ < 3)"
                )
            }
            Error::AmplitudeOutOfRange { r, max } => {
                write!(f, "amplitude out of range: r = {r} not in (0, {max})")
            }
            Error::TruncationTooAggressive { edge_over_crest } => {
                write!(
                    f,
                    "domain truncation too aggressive: R(L)/T(ω) = {edge_over_crest:.3e} exceeds 1e-6"
                )
            }
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::InvalidLevel { lambda } => {
                write!(f, "invalid mass level: λ = {lambda} must be positive")
            }
            Error::NoMultiplicityWindow { sigma } => {
                write!(
                    f,
                    "no multiplicity window: requires 2 < σ < 3 with b < 0, got σ = {sigma:.6}"
                )
            }
            Error::OutsideWindow {
                lambda,
                lambda_min,
                lambda_max,
            } => {
                write!(
                    f,
                    "mass level outside window: λ = {lambda} not in [{lambda_min}, {lambda_max}]"
                )
            }
            Error::IncompatibleGrids => write!(f, "incompatible grids"),
            Error::BlowUp { t } => {
                write!(f, "blow-up or instability detected at t = {t}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
