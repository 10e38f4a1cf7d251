mod common;

use common::{grid, rel, smooth_field};
use gkp_core::evolution::*;
use gkp_core::{Error, Field, PhysicalParams, Spectral};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Linear run of `cos(ξx + ηy)`; returns the max deviation from
/// `cos(ξx + ηy + Ωt)` after one period (or t = 1 for Ω = 0).
fn single_mode_error(alpha: f64, eps: f64, a: i64, b: i64, scheme: Scheme) -> (f64, f64) {
    let l = 2.0 * PI * 4.0;
    let g = grid(32, l);
    let sp = Spectral::new(g, alpha).unwrap();
    let (xi, eta) = (a as f64 / 4.0, b as f64 / 4.0);
    let omega = xi * xi.abs().powf(2.0 * alpha) - eps * eta * eta / xi;
    let t = if omega.abs() > 1e-12 { 2.0 * PI / omega.abs() } else { 1.0 };
    let steps = 200;
    let params = PhysicalParams::linear(alpha, eps);
    let cfg =
        TimeStepperConfig { dt: t / steps as f64, t_end: t, scheme, diagnostics_every: steps, ..Default::default() };
    let u0 = Field::from_fn(g, |x, y| (xi * x + eta * y).cos());
    let tr = run(&sp, &u0, &params, &cfg).unwrap();
    let exact = Field::from_fn(g, |x, y| (xi * x + eta * y + omega * t).cos());
    let err = tr.final_field.values().iter().zip(exact.values()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    (err, omega)
}

#[test]
fn linear_modes_follow_the_dispersion_relation() {
    // (ξ, η) = (1, 1) with ε = +1, α = 1 has Ω = ξ³ − η²/ξ = 0.
    let modes = [(1, 0), (2, 3), (-3, 5), (5, -2), (4, 4)];
    for scheme in [Scheme::IfRk4, Scheme::EtdRk4] {
        let mut saw_zero = false;
        for (a, b) in modes {
            let (err, omega) = single_mode_error(1.0, 1.0, a, b, scheme);
            saw_zero |= omega == 0.0;
            assert!(err < 1e-8, "{scheme:?} mode ({a},{b}) err {err:e}");
        }
        assert!(saw_zero);
    }
    let (err, _) = single_mode_error(0.6, -1.0, 3, 2, Scheme::EtdRk4);
    assert!(err < 1e-8);
}

#[test]
fn dispersion_symbol_is_odd_in_xi() {
    let sp = Spectral::new(grid(16, 10.0), 1.3).unwrap();
    let om = dispersion_symbol(&sp, -1.0);
    let g = sp.grid();
    for a in 1..7i64 {
        for b in 0..8i64 {
            let i = g.spectral_index(a, b).unwrap();
            let j = g.spectral_index(-a, b).unwrap();
            assert!((om[i] + om[j]).abs() < 1e-12 * om[i].abs().max(1.0));
        }
    }
}

#[test]
fn time_reversal_returns_to_the_start() {
    let sp = Spectral::new(grid(64, 40.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u0 = smooth_field(&sp, &mut rng, 5, 0.5);
    let p = PhysicalParams::default();
    for scheme in [Scheme::IfRk4, Scheme::EtdRk4] {
        let e = time_reversal_error(&sp, &u0, &p, 0.01, 50, scheme).unwrap();
        assert!(e < 1e-8, "{scheme:?}: {e:e}");
    }
}

#[test]
fn short_run_conserves_mass_energy_momentum() {
    let sp = Spectral::new(grid(64, 40.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u0 = smooth_field(&sp, &mut rng, 4, 0.5);
    let p = PhysicalParams::default();
    let cfg = TimeStepperConfig { dt: 0.01, t_end: 1.0, scheme: Scheme::EtdRk4, ..Default::default() };
    let tr = run(&sp, &u0, &p, &cfg).unwrap();
    assert_eq!(tr.terminated, Termination::Completed);
    assert!(tr.mass_drift() < 1e-5, "mass {:e}", tr.mass_drift());
    assert!(tr.energy_drift() < 1e-5, "energy {:e}", tr.energy_drift());
    assert!(tr.momentum_drift() < 1e-5);
    assert!((tr.final_time() - 1.0).abs() < 1e-12);
    assert!(tr.realness_defect.iter().all(|d| *d < 1e-12));
}

#[test]
fn drift_shrinks_at_fourth_order() {
    let sp = Spectral::new(grid(64, 40.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u0 = smooth_field(&sp, &mut rng, 3, 1.5);
    let p = PhysicalParams::default();
    let drift = |dt: f64| {
        let cfg =
            TimeStepperConfig { dt, t_end: 1.0, scheme: Scheme::EtdRk4, diagnostics_every: 1, ..Default::default() };
        run(&sp, &u0, &p, &cfg).unwrap().energy_drift()
    };
    let ratio = drift(0.1) / drift(0.05);
    assert!(ratio > 8.0 && ratio < 40.0, "ratio {ratio}");
}

#[test]
fn linear_virial_matches_second_difference() {
    // Linear flow: 𝒱'' = 8‖∂⁻¹u_y‖² exactly.
    let sp = Spectral::new(grid(128, 64.0), 1.0).unwrap();
    let u0 = Field::from_fn(*sp.grid(), |x, y| -2.0 * x * (-(x * x + y * y) / 4.0).exp());
    let p = PhysicalParams::linear(1.0, -1.0);
    let cfg = TimeStepperConfig { dt: 0.002, t_end: 0.4, diagnostics_every: 10, ..Default::default() };
    let tr = run(&sp, &u0, &p, &cfg).unwrap();
    let v = virial_series(&tr).unwrap();
    assert!(v.max_rel_error < 1e-4, "{:e}", v.max_rel_error);
    for (rhs, y) in tr.virial_rhs.iter().zip(&tr.dinv_uy_norm) {
        assert!(rel(*rhs, 8.0 * y * y) < 1e-12);
    }
}

#[test]
fn moment_checks_need_three_samples() {
    let sp = Spectral::new(grid(32, 20.0), 1.0).unwrap();
    let u0 = Field::from_fn(*sp.grid(), |x, y| (2.0 * PI * x / 20.0).sin() * (-(y * y)).exp());
    let cfg = TimeStepperConfig { dt: 0.01, t_end: 0.01, ..Default::default() };
    let tr = run(&sp, &u0, &PhysicalParams::default(), &cfg).unwrap();
    assert_eq!(tr.times.len(), 2);
    assert_eq!(virial_series(&tr).unwrap_err(), Error::InsufficientSampling { needed: 3, found: 2 });
    assert!(x_moment_series(&tr).is_err());
}

#[test]
fn nonzero_x_mean_data_is_rejected() {
    let sp = Spectral::new(grid(32, 20.0), 1.0).unwrap();
    let u0 = Field::from_fn(*sp.grid(), |x, y| (-(x * x + y * y)).exp());
    let cfg = TimeStepperConfig::default();
    assert!(matches!(run(&sp, &u0, &PhysicalParams::default(), &cfg), Err(Error::NonZeroXMean { .. })));
}

#[test]
fn norm_cap_flags_blowup() {
    let sp = Spectral::new(grid(32, 20.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u0 = smooth_field(&sp, &mut rng, 3, 0.5);
    let cfg = TimeStepperConfig { dt: 0.01, t_end: 0.5, blowup_norm_cap: Some(1e-9), ..Default::default() };
    let tr = run(&sp, &u0, &PhysicalParams::default(), &cfg).unwrap();
    assert_eq!(tr.terminated, Termination::BlowupDetected);
    let rep = blowup_monitor(&tr);
    assert!(rep.flagged);
    assert_eq!(rep.reason, Some("normCap"));
}

#[test]
fn invalid_stepper_configs() {
    let sp = Spectral::new(grid(16, 10.0), 1.0).unwrap();
    let p = PhysicalParams::default();
    assert!(TimeStepperConfig { dt: 0.0, ..Default::default() }.validate().is_err());
    assert!(TimeStepperConfig { diagnostics_every: 0, ..Default::default() }.validate().is_err());
    assert!(TimeStepperConfig { band_guard: 1.5, ..Default::default() }.validate().is_err());
    assert!(Stepper::new(&sp, &p, 0.0, Scheme::IfRk4, true).is_err());
    assert!(default_dt(&sp, &p, true) > 0.0);
}
