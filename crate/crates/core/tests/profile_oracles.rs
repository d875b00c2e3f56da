//! Quadrature oracles and profile invariants. The point of the module: the
//! independently integrated mass and energy must reproduce the closed forms.

use solwave_core::curve::{energy_closed, mass_closed};
use solwave_core::profile::{energy_numeric, mass_numeric, position_of_amplitude, sample_profile};
use solwave_core::CubicParams;

fn fixtures() -> [CubicParams; 3] {
    [
        CubicParams::new(1.0, -2.0, 3.0).unwrap(),
        CubicParams::new(2.0, -2.0, 1.0).unwrap(),
        CubicParams::new(1.0, -f64::sqrt(33.0) / 2.0, 3.0).unwrap(),
    ]
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[test]
fn mass_quadrature_reproduces_the_closed_form() {
    for p in fixtures() {
        for omega in log_spaced(1e-2, 1e2, 20) {
            let numeric = mass_numeric(&p, omega);
            let closed = mass_closed(&p, omega);
            assert!(
                (numeric - closed).abs() <= 1e-7 * closed,
                "omega {omega:e}: {numeric} vs {closed}"
            );
        }
    }
}

#[test]
fn energy_quadrature_reproduces_the_closed_form() {
    for p in fixtures() {
        for omega in log_spaced(1e-2, 1e2, 20) {
            let numeric = energy_numeric(&p, omega);
            let closed = energy_closed(&p, omega);
            assert!(
                (numeric - closed).abs() <= 1e-7 * closed.abs(),
                "omega {omega:e}: {numeric} vs {closed}"
            );
        }
    }
}

#[test]
fn frozen_values_at_unit_frequency() {
    // forward evaluation of the cubic gives lambda(1) = 58/15 for (1,-2,3);
    // integrating -(w/2) lambda'(w) gives e(1) = -19/35
    let p = CubicParams::new(1.0, -2.0, 3.0).unwrap();
    assert!((mass_numeric(&p, 1.0) - 58.0 / 15.0).abs() <= 1e-8);
    assert!((energy_numeric(&p, 1.0) - (-19.0 / 35.0)).abs() <= 1e-7);
    let q = CubicParams::new(2.0, -2.0, 1.0).unwrap();
    assert!((mass_numeric(&q, 0.25) - 8.0 / 15.0).abs() <= 1e-8 * (8.0 / 15.0));
}

#[test]
fn sampled_profile_satisfies_both_identities() {
    let p = CubicParams::new(2.0, -2.0, 1.0).unwrap();
    let prof = sample_profile(&p, 0.25, 8192, 60.0).unwrap();
    assert!(
        prof.elliptic_residual(&p) <= 1e-5,
        "elliptic {:e}",
        prof.elliptic_residual(&p)
    );
    assert!(prof.first_order_residual(&p) <= 1e-6);
    let t = p.crest_amplitude(0.25);
    assert!((prof.crest() - t).abs() <= 1e-9 * t);
}

#[test]
fn profile_energy_discretizations_agree() {
    for (p, omega) in [
        (CubicParams::new(1.0, -2.0, 3.0).unwrap(), 1.0_f64),
        (CubicParams::new(2.0, -2.0, 1.0).unwrap(), 0.25),
    ] {
        let half_width = (30.0 / omega.sqrt()).max(20.0);
        let prof = sample_profile(&p, omega, 8192, half_width).unwrap();
        let rel = (prof.grid_energy(&p) - prof.energy()).abs() / prof.energy().abs();
        assert!(rel <= 1e-5, "omega {omega}: rel {rel:e}");
        let relm = (prof.grid_mass() - prof.mass()).abs() / prof.mass();
        assert!(relm <= 1e-7, "omega {omega}: mass rel {relm:e}");
    }
}

#[test]
fn decay_slope_matches_the_linearization() {
    for (omega, half_width) in [(0.25, 60.0), (1.0, 30.0), (2.0, 22.0)] {
        let p = CubicParams::new(1.0, -2.0, 3.0).unwrap();
        let prof = sample_profile(&p, omega, 4096, half_width).unwrap();
        let slope = prof.tail_decay_slope();
        let target = -omega.sqrt();
        assert!(
            (slope - target).abs() <= 0.01 * target.abs(),
            "omega {omega}: slope {slope} vs {target}"
        );
    }
}

#[test]
fn inversion_round_trip_through_the_position_map() {
    let p = CubicParams::new(1.0, -2.0, 3.0).unwrap();
    let omega = 1.0;
    let t = p.crest_amplitude(omega);
    let prof = sample_profile(&p, omega, 2048, 30.0).unwrap();
    let r = t / 2.0;
    let x = position_of_amplitude(&p, omega, r).unwrap();
    // resample the profile at that abscissa by linear interpolation
    let h = prof.spacing();
    let j = ((x + prof.half_width()) / h).floor() as usize;
    let frac = (x + prof.half_width()) / h - j as f64;
    let interp = prof.rs()[j] * (1.0 - frac) + prof.rs()[j + 1] * frac;
    assert!(
        (interp - r).abs() <= 1e-5 * t,
        "grid round trip {interp} vs {r}"
    );
    // exact round trip through the solver itself
    let x2 = position_of_amplitude(&p, omega, r + 1e-9).unwrap();
    assert!(x2 < x);
}

#[test]
fn profile_mass_matches_grid_mass_for_window_fixture() {
    let p = CubicParams::new(1.0, -f64::sqrt(33.0) / 2.0, 3.0).unwrap();
    let prof = sample_profile(&p, 0.5, 8192, 45.0).unwrap();
    let rel = (prof.grid_mass() - mass_closed(&p, 0.5)).abs() / mass_closed(&p, 0.5);
    assert!(rel <= 1e-9, "rel {rel:e}");
}
