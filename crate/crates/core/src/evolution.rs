//! Empirical orbital-stability probe: split-step spectral evolution of the
//! focusing equation `i phi_t + phi_xx - G'(|phi|) phi/|phi| = 0` on a large
//! periodic box, plus the distance to the standing-wave orbit
//! `{ e^{i theta} R(. - y) }`.
//!
//! With the convention `phi = e^{+i omega t} R_omega` the profile equation
//! `R'' - G'(R) - omega R = 0` holds verbatim, and the nonlinear half-step is
//! the phase rotation `phi <- phi exp(-i dt/2 W(|phi|))` with
//! `W(s) = G'(s)/s` extended by `W(0) = 0`. The linear step is exact in
//! Fourier space, so mass is conserved to rounding and only the Strang
//! splitting error (second order in `dt`) touches the energy.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::Fft;
use crate::nonlinearity::CubicParams;
use crate::profile::Profile;
use crate::{Error, Result};

/// Uniform periodic grid of `2 n` points on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    half_count: usize,
    half_width: f64,
}

impl PeriodicGrid {
    pub fn new(half_count: usize, half_width: f64) -> Result<Self> {
        if !(2 * half_count).is_power_of_two() || half_count < 64 {
            return Err(Error::InvalidArgument(
                "grid needs 2n points with n a power of two, n >= 64",
            ));
        }
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::InvalidArgument(
                "half-width must be positive and finite",
            ));
        }
        Ok(Self {
            half_count,
            half_width,
        })
    }

    pub fn len(&self) -> usize {
        2 * self.half_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.half_width / self.half_count as f64
    }

    /// Grid point `x_j = (j - n) h`, `j = 0 .. 2n-1`.
    pub fn point(&self, j: usize) -> f64 {
        (j as f64 - self.half_count as f64) * self.spacing()
    }

    /// Physical wavenumber of DFT bin `m` (signed index convention).
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n2 = self.len();
        let signed = if m < n2 / 2 {
            m as f64
        } else {
            m as f64 - n2 as f64
        };
        core::f64::consts::PI * signed / self.half_width
    }
}

/// Shape of the initial perturbation added to the standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMode {
    /// `exp(-x^2/2)`, orthogonal to both orbit tangent directions.
    EvenBump,
    /// `x exp(-x^2/2)`.
    OddBump,
    /// `i sin(pi x / L) R(x)`, a smooth local phase tilt.
    PhaseRamp,
}

impl PerturbationMode {
    pub fn name(&self) -> &'static str {
        match self {
            PerturbationMode::EvenBump => "even-bump",
            PerturbationMode::OddBump => "odd-bump",
            PerturbationMode::PhaseRamp => "phase-ramp",
        }
    }
}

/// Complex field on a periodic grid, advancing under Strang splitting.
pub struct EvolutionState {
    params: CubicParams,
    grid: PeriodicGrid,
    t: f64,
    dt: f64,
    field: Vec<Complex64>,
    mass0: f64,
    energy0: f64,
    fft: Fft,
    linear_phase: Vec<Complex64>,
    branch_cache: Vec<f64>,
}

/// Distances to the standing-wave orbit sampled along a run.
#[derive(Debug, Clone)]
pub struct OrbitDistanceSeries {
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
    pub mass_drift: Vec<f64>,
    pub energy_drift: Vec<f64>,
    /// H1 size of the prepared perturbation (`eps` after unit normalization).
    pub perturbation_size: f64,
}

impl OrbitDistanceSeries {
    pub fn max_distance(&self) -> f64 {
        self.distances.iter().fold(0.0_f64, |acc, d| acc.max(*d))
    }

    pub fn max_mass_drift(&self) -> f64 {
        self.mass_drift.iter().fold(0.0_f64, |acc, d| acc.max(*d))
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().fold(0.0_f64, |acc, d| acc.max(*d))
    }
}

impl EvolutionState {
    /// Wraps an arbitrary complex field.
    pub fn new(
        params: CubicParams,
        grid: PeriodicGrid,
        field: Vec<Complex64>,
        dt: f64,
    ) -> Result<Self> {
        if field.len() != grid.len() {
            return Err(Error::IncompatibleGrids);
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidArgument("dt must be positive and finite"));
        }
        let fft = Fft::new(grid.len());
        let linear_phase = (0..grid.len())
            .map(|m| {
                let k = grid.wavenumber(m);
                Complex64::new(libm::cos(k * k * dt), -libm::sin(k * k * dt))
            })
            .collect();
        let mut state = Self {
            params,
            grid,
            t: 0.0,
            dt,
            field,
            mass0: 0.0,
            energy0: 0.0,
            fft,
            linear_phase,
            branch_cache: vec![0.0; grid.len()],
        };
        state.mass0 = state.mass();
        state.energy0 = state.energy();
        Ok(state)
    }

    /// Starts from a sampled standing-wave profile (the grid point at `+L`
    /// is dropped; the tail there is below the truncation tolerance).
    pub fn from_profile(params: CubicParams, profile: &Profile, dt: f64) -> Result<Self> {
        let grid = PeriodicGrid::new(profile.half_count(), profile.half_width())?;
        let field = profile.rs()[..grid.len()]
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect();
        Self::new(params, grid, field, dt)
    }

    pub fn params(&self) -> &CubicParams {
        &self.params
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn field(&self) -> &[Complex64] {
        &self.field
    }

    pub fn mass0(&self) -> f64 {
        self.mass0
    }

    pub fn energy0(&self) -> f64 {
        self.energy0
    }

    /// Discrete mass `h sum |phi|^2`.
    pub fn mass(&self) -> f64 {
        self.grid.spacing() * self.field.iter().map(Complex64::norm_sqr).sum::<f64>()
    }

    /// Discrete energy with the spectral derivative,
    /// `h sum (|phi'|^2 / 2 + G(|phi|))`.
    pub fn energy(&self) -> f64 {
        let mut spec = self.field.clone();
        self.fft.forward(&mut spec);
        for (m, z) in spec.iter_mut().enumerate() {
            let k = self.grid.wavenumber(m);
            *z *= Complex64::new(0.0, k);
        }
        self.fft.inverse(&mut spec);
        let mut acc = 0.0;
        for (d, z) in spec.iter().zip(&self.field) {
            acc += 0.5 * d.norm_sqr() + self.params.nonlinear_term(z.norm()).g;
        }
        self.grid.spacing() * acc
    }

    pub fn mass_drift(&self) -> f64 {
        (self.mass() - self.mass0).abs() / self.mass0.max(1e-300)
    }

    pub fn energy_drift(&self) -> f64 {
        (self.energy() - self.energy0).abs() / self.energy0.abs().max(1e-300)
    }

    fn nonlinear_half_step(&mut self) {
        let half_dt = 0.5 * self.dt;
        for (z, cache) in self.field.iter_mut().zip(self.branch_cache.iter_mut()) {
            let rho = z.norm();
            let (w, v) = self.params.phase_multiplier_cached(rho, *cache);
            *cache = v;
            let theta = -half_dt * w;
            *z *= Complex64::new(libm::cos(theta), libm::sin(theta));
        }
    }

    fn linear_step(&mut self) {
        self.fft.forward(&mut self.field);
        for (z, phase) in self.field.iter_mut().zip(&self.linear_phase) {
            *z *= phase;
        }
        self.fft.inverse(&mut self.field);
    }

    fn advance(&mut self, n_steps: usize, with_nonlinearity: bool) -> Result<()> {
        for _ in 0..n_steps {
            if with_nonlinearity {
                self.nonlinear_half_step();
            }
            self.linear_step();
            if with_nonlinearity {
                self.nonlinear_half_step();
            }
            self.t += self.dt;
            if !self
                .field
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
            {
                return Err(Error::BlowUp { t: self.t });
            }
        }
        Ok(())
    }

    /// Advances by `n_steps` Strang steps.
    pub fn step(mut self, n_steps: usize) -> Result<Self> {
        self.advance(n_steps, true)?;
        Ok(self)
    }

    /// Linear flow only (`G = 0`); test hook for the exact free propagator.
    #[cfg(test)]
    pub(crate) fn step_free(mut self, n_steps: usize) -> Result<Self> {
        self.advance(n_steps, false)?;
        Ok(self)
    }
}

/// Discrete H1 norm via the spectral derivative.
pub fn h1_norm(grid: &PeriodicGrid, values: &[Complex64]) -> f64 {
    assert_eq!(values.len(), grid.len());
    let fft = Fft::new(grid.len());
    let mut spec = values.to_vec();
    fft.forward(&mut spec);
    let scale = grid.spacing() / grid.len() as f64;
    let mut acc = 0.0;
    for (m, z) in spec.iter().enumerate() {
        let k = grid.wavenumber(m);
        acc += (1.0 + k * k) * z.norm_sqr();
    }
    libm::sqrt(scale * acc)
}

fn golden_min<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    iters: usize,
    mut f: F,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Distance from the field to the orbit `{ e^{i theta} R(. - y) }` in the
/// discrete H1 metric: a coarse scan over all grid shifts and 32 phases,
/// followed by golden-section refinement in the shift and the phase.
pub fn orbit_distance(state: &EvolutionState, profile: &Profile) -> Result<f64> {
    let grid = state.grid;
    if profile.half_count() != grid.half_count() || profile.spacing() != grid.spacing() {
        return Err(Error::IncompatibleGrids);
    }
    let n2 = grid.len();
    let h = grid.spacing();

    let mut phi_spec = state.field.to_vec();
    state.fft.forward(&mut phi_spec);
    let mut ref_spec: Vec<Complex64> = profile.rs()[..n2]
        .iter()
        .map(|&r| Complex64::new(r, 0.0))
        .collect();
    state.fft.forward(&mut ref_spec);

    let scale = h / n2 as f64;
    let mut norm_sum = 0.0;
    let mut weights: Vec<f64> = Vec::with_capacity(n2);
    // cross spectrum weighted by the H1 multiplier
    let mut cross: Vec<Complex64> = Vec::with_capacity(n2);
    for m in 0..n2 {
        let k = grid.wavenumber(m);
        let w = 1.0 + k * k;
        weights.push(w);
        norm_sum += w * (phi_spec[m].norm_sqr() + ref_spec[m].norm_sqr());
        cross.push(scale * w * phi_spec[m] * ref_spec[m].conj());
    }
    let norms = scale * norm_sum;

    // <phi, R(. - j h)> for every grid shift in one inverse transform
    let mut shift_ip = cross;
    state.fft.inverse(&mut shift_ip);
    for z in shift_ip.iter_mut() {
        *z *= n2 as f64;
    }

    let mut best = (0usize, 0usize, f64::INFINITY);
    for (j, c) in shift_ip.iter().enumerate() {
        for m in 0..32 {
            let theta = 2.0 * core::f64::consts::PI * m as f64 / 32.0;
            let rot = Complex64::new(libm::cos(theta), -libm::sin(theta));
            let d2 = norms - 2.0 * (rot * c).re;
            if d2 < best.2 {
                best = (j, m, d2);
            }
        }
    }

    // direct residual form || phi - e^{i theta} R(. - y) ||^2: summed squares,
    // so tiny distances come out free of cancellation noise
    let direct_d2 = |y: f64, theta: f64| -> f64 {
        let rot = Complex64::new(libm::cos(theta), libm::sin(theta));
        let base = {
            let arg = core::f64::consts::PI * y / grid.half_width();
            Complex64::new(libm::cos(arg), -libm::sin(arg))
        };
        let mut acc = 0.0;
        let mut power = Complex64::new(1.0, 0.0);
        for m in 0..n2 / 2 {
            let diff = phi_spec[m] - rot * ref_spec[m] * power;
            acc += weights[m] * diff.norm_sqr();
            power *= base;
        }
        let conj_base = base.conj();
        let mut power = conj_base;
        for m in (n2 / 2..n2).rev() {
            let diff = phi_spec[m] - rot * ref_spec[m] * power;
            acc += weights[m] * diff.norm_sqr();
            power *= conj_base;
        }
        scale * acc
    };

    let mut y = best.0 as f64 * h;
    if best.0 >= grid.half_count() {
        y -= 2.0 * grid.half_width();
    }
    let mut theta = 2.0 * core::f64::consts::PI * best.1 as f64 / 32.0;
    let mut d2 = direct_d2(y, theta);
    for _ in 0..2 {
        let (y_best, d2y) = golden_min(y - h, y + h, 48, |yy| direct_d2(yy, theta));
        if d2y < d2 {
            y = y_best;
            d2 = d2y;
        }
        let width = core::f64::consts::PI / 16.0;
        let (t_best, d2t) = golden_min(theta - width, theta + width, 48, |tt| direct_d2(y, tt));
        if d2t < d2 {
            theta = t_best;
            d2 = d2t;
        }
    }
    Ok(libm::sqrt(d2.max(0.0)))
}

/// Options for [`stability_experiment_with`].
#[derive(Debug, Clone, Copy)]
pub struct ExperimentOptions {
    pub half_count: usize,
    /// Defaults to `max(20, 24/sqrt(omega))` so the wrapped-around tail sits
    /// below `1e-10` of the crest.
    pub half_width: Option<f64>,
    pub dt: f64,
    pub samples: usize,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            half_count: 1024,
            half_width: None,
            dt: 1e-3,
            samples: 100,
        }
    }
}

/// Default evolution half-width for a frequency.
pub fn default_half_width(omega: f64) -> f64 {
    let needed = 24.0 / libm::sqrt(omega);
    if needed > 20.0 {
        needed
    } else {
        20.0
    }
}

/// Prepares `R_omega + eps * (unit-H1 perturbation)`, evolves to the horizon
/// and samples the orbit distance at uniform times.
pub fn stability_experiment(
    p: &CubicParams,
    omega: f64,
    eps: f64,
    horizon: f64,
    mode: PerturbationMode,
) -> Result<OrbitDistanceSeries> {
    stability_experiment_with(p, omega, eps, horizon, mode, ExperimentOptions::default())
}

pub fn stability_experiment_with(
    p: &CubicParams,
    omega: f64,
    eps: f64,
    horizon: f64,
    mode: PerturbationMode,
    opts: ExperimentOptions,
) -> Result<OrbitDistanceSeries> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidArgument("omega must be positive and finite"));
    }
    if !(0.0..=0.1).contains(&eps) {
        return Err(Error::InvalidArgument(
            "perturbation size must lie in [0, 0.1]",
        ));
    }
    if !horizon.is_finite() || horizon <= 0.0 || horizon > 100.0 {
        return Err(Error::InvalidArgument("horizon must lie in (0, 100]"));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample interval"));
    }
    let half_width = opts.half_width.unwrap_or_else(|| default_half_width(omega));
    let profile = crate::profile::sample_profile(p, omega, opts.half_count, half_width)?;

    let sample_dt = horizon / opts.samples as f64;
    let steps_per_sample = libm::ceil(sample_dt / opts.dt) as usize;
    let dt = sample_dt / steps_per_sample as f64;

    let mut state = EvolutionState::from_profile(*p, &profile, dt)?;
    let grid = *state.grid();
    if eps > 0.0 {
        let mut pert: Vec<Complex64> = (0..grid.len())
            .map(|j| {
                let x = grid.point(j);
                match mode {
                    PerturbationMode::EvenBump => Complex64::new(libm::exp(-0.5 * x * x), 0.0),
                    PerturbationMode::OddBump => Complex64::new(x * libm::exp(-0.5 * x * x), 0.0),
                    PerturbationMode::PhaseRamp => {
                        let ramp = libm::sin(core::f64::consts::PI * x / grid.half_width());
                        Complex64::new(0.0, ramp * profile.rs()[j])
                    }
                }
            })
            .collect();
        let nrm = h1_norm(&grid, &pert);
        for z in pert.iter_mut() {
            *z *= eps / nrm;
        }
        let field: Vec<Complex64> = state
            .field()
            .iter()
            .zip(&pert)
            .map(|(f, q)| f + q)
            .collect();
        state = EvolutionState::new(*p, grid, field, dt)?;
    }

    let mut series = OrbitDistanceSeries {
        times: Vec::with_capacity(opts.samples + 1),
        distances: Vec::with_capacity(opts.samples + 1),
        mass_drift: Vec::with_capacity(opts.samples + 1),
        energy_drift: Vec::with_capacity(opts.samples + 1),
        perturbation_size: eps,
    };
    series.times.push(0.0);
    series.distances.push(orbit_distance(&state, &profile)?);
    series.mass_drift.push(0.0);
    series.energy_drift.push(0.0);
    for i in 1..=opts.samples {
        state = state.step(steps_per_sample)?;
        series.times.push(i as f64 * sample_dt);
        series.distances.push(orbit_distance(&state, &profile)?);
        series.mass_drift.push(state.mass_drift());
        series.energy_drift.push(state.energy_drift());
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::sample_profile;

    fn fig1() -> CubicParams {
        CubicParams::new(1.0, -2.0, 3.0).unwrap()
    }

    fn standing_wave_state(dt: f64) -> (EvolutionState, Profile) {
        let p = fig1();
        let profile = sample_profile(&p, 1.0, 1024, 24.0).unwrap();
        let state = EvolutionState::from_profile(p, &profile, dt).unwrap();
        (state, profile)
    }

    #[test]
    fn zero_field_stays_zero() {
        let p = fig1();
        let grid = PeriodicGrid::new(128, 20.0).unwrap();
        let zeros = vec![Complex64::new(0.0, 0.0); grid.len()];
        let state = EvolutionState::new(p, grid, zeros, 1e-3).unwrap();
        let state = state.step(50).unwrap();
        assert!(state.field().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn free_gaussian_matches_the_analytic_propagator() {
        // i phi_t + phi_xx = 0 with phi_0 = exp(-x^2/(2 s^2) + i k0 x):
        // phi(t,x) = s/sqrt(s^2 + 2 i t) exp(i k0 x - i k0^2 t
        //            - (x - 2 k0 t)^2 / (2 (s^2 + 2 i t)))
        let p = fig1();
        let grid = PeriodicGrid::new(512, 40.0).unwrap();
        let s = 2.0;
        let k0 = 0.5;
        let field: Vec<Complex64> = (0..grid.len())
            .map(|j| {
                let x = grid.point(j);
                Complex64::new(0.0, k0 * x).exp() * libm::exp(-x * x / (2.0 * s * s))
            })
            .collect();
        let state = EvolutionState::new(p, grid, field, 1e-3).unwrap();
        let m0 = state.mass();
        let t_final = 1.0;
        let state = state.step_free(1000).unwrap();
        assert!(
            (state.mass() - m0).abs() <= 1e-12 * m0,
            "mass must be conserved exactly"
        );
        let denom = Complex64::new(s * s, 2.0 * t_final);
        let amp = Complex64::new(s * s, 0.0) / denom;
        let amp = amp.sqrt();
        let mut worst = 0.0_f64;
        for j in 0..grid.len() {
            let x = grid.point(j);
            let center = x - 2.0 * k0 * t_final;
            let analytic = amp
                * (Complex64::new(0.0, k0 * x - k0 * k0 * t_final)
                    - Complex64::new(center * center, 0.0) / (2.0 * denom))
                    .exp();
            worst = worst.max((state.field()[j] - analytic).norm());
        }
        assert!(worst <= 1e-8, "sup deviation {worst:e}");
    }

    #[test]
    fn standing_wave_keeps_modulus_and_gains_the_right_phase() {
        let (state, profile) = standing_wave_state(1e-3);
        let state = state.step(5000).unwrap();
        let mut worst = 0.0_f64;
        for (z, &r) in state.field().iter().zip(profile.rs()) {
            worst = worst.max((z.norm() - r).abs());
        }
        assert!(worst <= 1e-6, "modulus drift {worst:e}");
        // phase convention: phi(t) = e^{+i omega t} R with omega = 1
        let crest = state.field()[state.grid().half_count()];
        let expected = Complex64::new(libm::cos(5.0), libm::sin(5.0)) * profile.crest();
        assert!((crest - expected).norm() <= 1e-4, "crest phase {crest:?}");
    }

    #[test]
    fn conservation_over_a_long_run() {
        let (state, _) = standing_wave_state(1e-3);
        let state = state.step(2000).unwrap();
        assert!(state.mass_drift() <= 1e-10);
        assert!(state.energy_drift() <= 1e-8);
    }

    #[test]
    fn gauge_covariance_is_bitwise_for_quarter_turns() {
        let (state, profile) = standing_wave_state(1e-3);
        let p = fig1();
        let grid = *state.grid();
        let rotated: Vec<Complex64> = state
            .field()
            .iter()
            .map(|z| Complex64::new(0.0, 1.0) * z)
            .collect();
        let evolved_plain = state.step(200).unwrap();
        let evolved_rotated = EvolutionState::new(p, grid, rotated, 1e-3)
            .unwrap()
            .step(200)
            .unwrap();
        for (r, q) in evolved_rotated.field().iter().zip(evolved_plain.field()) {
            assert_eq!(*r, Complex64::new(0.0, 1.0) * q);
        }
        drop(profile);
    }

    #[test]
    fn translation_covariance_is_bitwise_for_half_rotations() {
        let (state, _) = standing_wave_state(1e-3);
        let p = fig1();
        let grid = *state.grid();
        let n2 = grid.len();
        let shifted: Vec<Complex64> = (0..n2).map(|j| state.field()[(j + n2 / 2) % n2]).collect();
        let evolved_plain = state.step(200).unwrap();
        let evolved_shifted = EvolutionState::new(p, grid, shifted, 1e-3)
            .unwrap()
            .step(200)
            .unwrap();
        for j in 0..n2 {
            assert_eq!(
                evolved_shifted.field()[j],
                evolved_plain.field()[(j + n2 / 2) % n2]
            );
        }
    }

    #[test]
    fn strang_splitting_is_second_order() {
        let p = fig1();
        let profile = sample_profile(&p, 1.0, 512, 24.0).unwrap();
        let grid = PeriodicGrid::new(512, 24.0).unwrap();
        let base: Vec<Complex64> = (0..grid.len())
            .map(|j| {
                let x = grid.point(j);
                Complex64::new(profile.rs()[j] + 1e-2 * libm::exp(-0.5 * x * x), 0.0)
            })
            .collect();
        let run = |dt: f64, steps: usize| {
            EvolutionState::new(p, grid, base.clone(), dt)
                .unwrap()
                .step(steps)
                .unwrap()
        };
        let reference = run(5e-4, 2000);
        let err = |state: &EvolutionState| {
            let mut acc = 0.0;
            for (a, b) in state.field().iter().zip(reference.field()) {
                acc += (a - b).norm_sqr();
            }
            libm::sqrt(acc)
        };
        let e_coarse = err(&run(4e-3, 250));
        let e_fine = err(&run(2e-3, 500));
        let ratio = e_coarse / e_fine;
        assert!(
            (3.0..=5.0).contains(&ratio),
            "splitting order ratio {ratio}"
        );
    }

    #[test]
    fn orbit_distance_identifies_orbit_members() {
        let (state, profile) = standing_wave_state(1e-3);
        assert!(orbit_distance(&state, &profile).unwrap() <= 1e-8);

        // phase times grid-interpolated shift (spectral shift by 3.2)
        let grid = *state.grid();
        let mut spec: Vec<Complex64> = state.field().to_vec();
        let fft = Fft::new(grid.len());
        fft.forward(&mut spec);
        for (m, z) in spec.iter_mut().enumerate() {
            let k = grid.wavenumber(m);
            *z *= Complex64::new(libm::cos(k * 3.2), -libm::sin(k * 3.2));
        }
        fft.inverse(&mut spec);
        let rot = Complex64::new(libm::cos(0.7), libm::sin(0.7));
        let member: Vec<Complex64> = spec.iter().map(|z| rot * z).collect();
        let member_state = EvolutionState::new(fig1(), grid, member, 1e-3).unwrap();
        let d = orbit_distance(&member_state, &profile).unwrap();
        assert!(d <= 1e-6, "distance {d:e}");
    }

    #[test]
    fn orbit_distance_sees_radial_perturbations_at_first_order() {
        let (state, profile) = standing_wave_state(1e-3);
        let grid = *state.grid();
        let eps = 1e-3;
        let scaled: Vec<Complex64> = state.field().iter().map(|z| z * (1.0 + eps)).collect();
        let scaled_state = EvolutionState::new(fig1(), grid, scaled, 1e-3).unwrap();
        let d = orbit_distance(&scaled_state, &profile).unwrap();
        let expected = eps * h1_norm(&grid, state.field());
        assert!(
            (d / expected - 1.0).abs() <= 0.1,
            "d {d}, expected {expected}"
        );
    }

    #[test]
    fn experiment_validates_inputs() {
        let p = fig1();
        assert!(stability_experiment(&p, 1.0, 0.5, 10.0, PerturbationMode::EvenBump).is_err());
        assert!(stability_experiment(&p, 1.0, 1e-3, 200.0, PerturbationMode::EvenBump).is_err());
        assert!(stability_experiment(&p, -1.0, 1e-3, 10.0, PerturbationMode::EvenBump).is_err());
    }

    #[test]
    fn unperturbed_run_stays_on_the_orbit() {
        let p = fig1();
        let opts = ExperimentOptions {
            half_count: 256,
            dt: 2.5e-4,
            samples: 5,
            half_width: None,
        };
        let series =
            stability_experiment_with(&p, 1.0, 0.0, 2.0, PerturbationMode::EvenBump, opts).unwrap();
        assert!(
            series.max_distance() <= 1e-6,
            "max {:e}",
            series.max_distance()
        );
    }
}
