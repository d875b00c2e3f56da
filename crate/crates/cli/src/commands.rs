//! Implementations of the subcommands.

use std::path::Path;

use solwave_core::classifier::{classify, constrained_hessian_check, multiplicity_level};
use solwave_core::curve::{critical_frequencies, energy_closed, mass_closed, mass_slope};
use solwave_core::evolution::{
    default_half_width, stability_experiment_with, ExperimentOptions, PerturbationMode,
};
use solwave_core::profile::sample_profile;
use solwave_core::CubicParams;

use crate::output::{num, write_out, Csv};
use crate::svg::Plot;
use crate::{CliError, EvalArgs, EvolveArgs, HessianArgs, LevelArgs, ProfileArgs, RangeArgs};

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn branches_tag(branches: &[u8]) -> String {
    let parts: Vec<String> = branches.iter().map(|b| b.to_string()).collect();
    parts.join("+")
}

/// Default half-width for sampled profiles: the tail decays like
/// `exp(-sqrt(omega) x)`, so `max(20, 30/sqrt(omega))` leaves it below the
/// truncation tolerance.
fn profile_half_width(omega: f64) -> f64 {
    (30.0 / omega.sqrt()).max(20.0)
}

pub fn cmd_eval(p: &CubicParams, args: &EvalArgs) -> Result<(), CliError> {
    match (args.s.is_empty(), args.omega.is_empty()) {
        (false, true) => {
            let mut csv = Csv::new(&["s", "v", "v1", "v2", "g", "g1", "g2"], p, &[]);
            for &s in &args.s {
                if !s.is_finite() || s < 0.0 {
                    return Err(CliError::Validation(format!(
                        "amplitude s = {s} must be >= 0"
                    )));
                }
                let b = p.branch(s);
                let g = p.nonlinear_term(s);
                csv.row(&[
                    num(s),
                    num(b.v),
                    num(b.v1),
                    num(b.v2),
                    num(g.g),
                    num(g.g1),
                    num(g.g2),
                ]);
            }
            write_out(args.out.as_deref(), csv.contents())
        }
        (true, false) => {
            let mut csv = Csv::new(
                &["omega", "crest", "lambda", "lambda_prime", "energy"],
                p,
                &[],
            );
            for &omega in &args.omega {
                if !omega.is_finite() || omega <= 0.0 {
                    return Err(CliError::Validation(format!("omega = {omega} must be > 0")));
                }
                csv.row(&[
                    num(omega),
                    num(p.crest_amplitude(omega)),
                    num(mass_closed(p, omega)),
                    num(mass_slope(p, omega)),
                    num(energy_closed(p, omega)),
                ]);
            }
            write_out(args.out.as_deref(), csv.contents())
        }
        _ => Err(CliError::Validation(
            "eval needs either --s values or --omega values (not both)".to_string(),
        )),
    }
}

pub fn cmd_profile(p: &CubicParams, args: &ProfileArgs) -> Result<(), CliError> {
    let half_width = args
        .half_width
        .unwrap_or_else(|| profile_half_width(args.omega));
    let prof = sample_profile(p, args.omega, args.n, half_width)?;
    let mut csv = Csv::new(
        &["x", "r"],
        p,
        &[
            ("omega", num(args.omega)),
            ("n", args.n.to_string()),
            ("half_width", num(half_width)),
            ("mass", num(prof.mass())),
            ("energy", num(prof.energy())),
        ],
    );
    for (x, r) in prof.xs().iter().zip(prof.rs()) {
        csv.row(&[num(*x), num(*r)]);
    }
    write_out(args.out.as_deref(), csv.contents())
}

pub fn cmd_curve(p: &CubicParams, args: &RangeArgs) -> Result<(), CliError> {
    let samples = args.samples.max(8);
    let omega_max = args.omega_max;
    if !omega_max.is_finite() || omega_max <= 0.0 {
        return Err(CliError::Validation(format!(
            "omega-max = {omega_max} must be > 0"
        )));
    }
    let omega_min = args.omega_min.unwrap_or(omega_max / samples as f64);
    if !omega_min.is_finite() || omega_min <= 0.0 || omega_min >= omega_max {
        return Err(CliError::Validation(format!(
            "omega-min = {omega_min} must satisfy 0 < omega-min < omega-max"
        )));
    }

    let crit = critical_frequencies(p);
    let pts: Vec<(f64, f64)> = (0..=samples)
        .map(|i| {
            let w = omega_min + (omega_max - omega_min) * i as f64 / samples as f64;
            (w, mass_closed(p, w))
        })
        .collect();

    let mut csv = Csv::new(
        &["omega", "lambda", "lambda_prime", "energy"],
        p,
        &[
            ("omega_min", num(omega_min)),
            ("omega_max", num(omega_max)),
            ("samples", samples.to_string()),
            ("omega_m", opt_num(crit.omega_m())),
            ("omega_M", opt_num(crit.omega_big_m())),
            ("omega_d", opt_num(crit.omega_d())),
        ],
    );
    for &(w, lam) in &pts {
        csv.row(&[
            num(w),
            num(lam),
            num(mass_slope(p, w)),
            num(energy_closed(p, w)),
        ]);
    }
    write_out(Some(Path::new(&args.out_csv)), csv.contents())?;

    let y_max = pts.iter().map(|p| p.1).fold(0.0_f64, f64::max);
    let mut plot = Plot::new(
        &format!("mass curve, sigma = {:.6}", p.sigma()),
        "omega",
        "lambda",
        (omega_min, omega_max),
        (0.0, y_max),
    );

    // shade the equal-area regions when the multiplicity window exists
    if crit.window().is_some() {
        if let Ok(lambda2) = multiplicity_level(p) {
            if let Ok(report) = classify(p, lambda2) {
                if report.branch_freqs.len() == 3 {
                    let (w1, w2, w3) = (
                        report.branch_freqs[0].omega,
                        report.branch_freqs[1].omega,
                        report.branch_freqs[2].omega,
                    );
                    let seg = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
                        (0..=160)
                            .map(|i| {
                                let w = lo + (hi - lo) * i as f64 / 160.0;
                                (w, mass_closed(p, w))
                            })
                            .collect()
                    };
                    plot.fill_between_level(&seg(w1, w2), lambda2, "#c8c8c8");
                    plot.fill_between_level(&seg(w2, w3), lambda2, "#c8c8c8");
                    plot.hline(lambda2, "#707070", true);
                }
            }
        }
    }

    plot.polyline(&pts, "#1f4e9c", 2.0);
    if let (Some(w_m), Some(w_mm)) = (crit.omega_m(), crit.omega_big_m()) {
        plot.vline(w_m, "#9c2f1f", true);
        plot.vline(w_mm, "#9c2f1f", true);
        plot.marker(
            w_m,
            crit.lambda_big_m().unwrap_or(0.0),
            "#9c2f1f",
            "omega_m",
        );
        plot.marker(w_mm, crit.lambda_m().unwrap_or(0.0), "#9c2f1f", "omega_M");
    }
    if let (Some(w_d), Some(l_d)) = (crit.omega_d(), crit.lambda_d()) {
        plot.vline(w_d, "#9c2f1f", true);
        plot.marker(w_d, l_d, "#9c2f1f", "omega_d");
    }
    write_out(Some(Path::new(&args.out_svg)), &plot.render())
}

pub fn cmd_classify(p: &CubicParams, args: &LevelArgs) -> Result<(), CliError> {
    let report = classify(p, args.lambda)?;
    let mut text = String::new();
    text.push_str(&format!(
        "sigma = {:.12} ({})\nlevel lambda = {}\n",
        report.sigma,
        report.regime.name(),
        num(report.level)
    ));
    for ((root, energy), degenerate) in report
        .branch_freqs
        .iter()
        .zip(&report.energies)
        .zip(&report.degenerate)
    {
        text.push_str(&format!(
            "branch {}: omega = {}, energy = {}, degenerate = {}\n",
            root.index,
            num(root.omega),
            num(*energy),
            if *degenerate { "yes" } else { "no" }
        ));
    }
    if let Some((g1, g2)) = report.areas {
        text.push_str(&format!("g1 = {}, g2 = {}\n", num(g1), num(g2)));
    }
    if let Some(l2) = report.lambda2 {
        text.push_str(&format!(
            "lambda2 = {} (distance {})\n",
            num(l2),
            num(report.lambda2_distance.unwrap_or(f64::NAN))
        ));
    }
    text.push_str(&format!(
        "minimizers: {} (branch {})\n",
        report.minimizer_count,
        branches_tag(&report.minimizing_branches)
    ));
    print!("{text}");

    if let Some(out) = &args.out_csv {
        let mut omegas = [None, None, None];
        let mut energies = [None, None, None];
        for (root, energy) in report.branch_freqs.iter().zip(&report.energies) {
            omegas[(root.index - 1) as usize] = Some(root.omega);
            energies[(root.index - 1) as usize] = Some(*energy);
        }
        let degenerate_branches: Vec<u8> = report
            .branch_freqs
            .iter()
            .zip(&report.degenerate)
            .filter(|(_, d)| **d)
            .map(|(r, _)| r.index)
            .collect();
        let mut csv = Csv::new(
            &[
                "sigma",
                "regime",
                "lambda",
                "n_roots",
                "omega1",
                "omega2",
                "omega3",
                "e1",
                "e2",
                "e3",
                "g1",
                "g2",
                "lambda2",
                "lambda2_distance",
                "minimizer_count",
                "minimizing_branches",
                "degenerate_branches",
            ],
            p,
            &[],
        );
        csv.row(&[
            num(report.sigma),
            report.regime.name().to_string(),
            num(report.level),
            report.branch_freqs.len().to_string(),
            opt_num(omegas[0]),
            opt_num(omegas[1]),
            opt_num(omegas[2]),
            opt_num(energies[0]),
            opt_num(energies[1]),
            opt_num(energies[2]),
            opt_num(report.areas.map(|a| a.0)),
            opt_num(report.areas.map(|a| a.1)),
            opt_num(report.lambda2),
            opt_num(report.lambda2_distance),
            report.minimizer_count.to_string(),
            branches_tag(&report.minimizing_branches),
            branches_tag(&degenerate_branches),
        ]);
        write_out(Some(out), csv.contents())?;
    }
    Ok(())
}

pub fn cmd_lambda2(p: &CubicParams, out_csv: Option<&Path>) -> Result<(), CliError> {
    let lambda2 = multiplicity_level(p)?;
    let crit = critical_frequencies(p);
    let report = classify(p, lambda2)?;
    let (g1, g2) = report.areas.unwrap_or((f64::NAN, f64::NAN));
    println!("sigma = {:.12}", p.sigma());
    println!(
        "window: lambda_m = {}, lambda_M = {}",
        opt_num(crit.lambda_m()),
        opt_num(crit.lambda_big_m())
    );
    println!("lambda2 = {}", num(lambda2));
    println!("g1 = {}, g2 = {}", num(g1), num(g2));
    if let Some(out) = out_csv {
        let mut csv = Csv::new(
            &[
                "sigma", "omega_m", "omega_M", "lambda_m", "lambda_M", "lambda2", "g1", "g2",
            ],
            p,
            &[],
        );
        csv.row(&[
            num(p.sigma()),
            opt_num(crit.omega_m()),
            opt_num(crit.omega_big_m()),
            opt_num(crit.lambda_m()),
            opt_num(crit.lambda_big_m()),
            num(lambda2),
            num(g1),
            num(g2),
        ]);
        write_out(Some(out), csv.contents())?;
    }
    Ok(())
}

pub fn cmd_hessian(p: &CubicParams, args: &HessianArgs) -> Result<(), CliError> {
    let half_width = args
        .half_width
        .unwrap_or_else(|| (40.0 / args.omega.sqrt()).max(20.0));
    let check = constrained_hessian_check(p, args.omega, args.n, half_width)?;
    let slope = mass_slope(p, args.omega);
    println!("omega = {}", num(args.omega));
    println!(
        "grid: n = {} (refined to {}), half-width = {}",
        args.n,
        2 * args.n,
        num(half_width)
    );
    println!(
        "sigma_min = {} (coarse {})",
        num(check.sigma_min),
        num(check.sigma_min_coarse)
    );
    println!("refinement ratio = {}", num(check.refinement_ratio));
    println!("lambda'(omega) = {}", num(slope));
    println!(
        "verdict: {}",
        if check.degenerate {
            "degenerate"
        } else {
            "nondegenerate"
        }
    );
    if let Some(out) = &args.out_csv {
        let mut csv = Csv::new(
            &[
                "omega",
                "n",
                "half_width",
                "spacing",
                "sigma_min_coarse",
                "sigma_min",
                "refinement_ratio",
                "lambda_prime",
                "degenerate",
            ],
            p,
            &[],
        );
        csv.row(&[
            num(args.omega),
            args.n.to_string(),
            num(half_width),
            num(check.spacing),
            num(check.sigma_min_coarse),
            num(check.sigma_min),
            num(check.refinement_ratio),
            num(slope),
            (check.degenerate as u8).to_string(),
        ]);
        write_out(Some(out), csv.contents())?;
    }
    Ok(())
}

fn parse_mode(raw: &str) -> Result<PerturbationMode, CliError> {
    match raw {
        "even" | "even-bump" => Ok(PerturbationMode::EvenBump),
        "odd" | "odd-bump" => Ok(PerturbationMode::OddBump),
        "phase" | "phase-ramp" => Ok(PerturbationMode::PhaseRamp),
        other => Err(CliError::Validation(format!(
            "unknown perturbation mode '{other}' (expected even-bump, odd-bump or phase-ramp)"
        ))),
    }
}

pub fn cmd_evolve(p: &CubicParams, args: &EvolveArgs) -> Result<(), CliError> {
    let mode = parse_mode(&args.mode)?;
    let opts = ExperimentOptions {
        half_count: args.n,
        half_width: Some(
            args.half_width
                .unwrap_or_else(|| default_half_width(args.omega)),
        ),
        dt: args.dt,
        samples: args.samples,
    };
    let series = stability_experiment_with(p, args.omega, args.eps, args.horizon, mode, opts)?;

    let mut csv = Csv::new(
        &["t", "mass_drift", "energy_drift", "orbit_distance"],
        p,
        &[
            ("omega", num(args.omega)),
            ("eps", num(args.eps)),
            ("horizon", num(args.horizon)),
            ("mode", mode.name().to_string()),
            ("dt", num(args.dt)),
            ("n", args.n.to_string()),
            ("seed", args.seed.to_string()),
        ],
    );
    for i in 0..series.times.len() {
        csv.row(&[
            num(series.times[i]),
            num(series.mass_drift[i]),
            num(series.energy_drift[i]),
            num(series.distances[i]),
        ]);
    }
    write_out(Some(Path::new(&args.out_csv)), csv.contents())?;

    let d_max = series.max_distance().max(1e-30);
    let mut plot = Plot::new(
        &format!("orbit distance, eps = {}", args.eps),
        "t",
        "orbit distance",
        (0.0, args.horizon),
        (0.0, d_max),
    );
    let pts: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.distances)
        .map(|(t, d)| (*t, *d))
        .collect();
    plot.polyline(&pts, "#1f4e9c", 2.0);
    write_out(Some(Path::new(&args.out_svg)), &plot.render())?;

    println!(
        "max orbit distance {} (mass drift {}, energy drift {})",
        num(series.max_distance()),
        num(series.max_mass_drift()),
        num(series.max_energy_drift())
    );
    Ok(())
}
