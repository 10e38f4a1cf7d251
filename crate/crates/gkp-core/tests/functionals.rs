mod common;

use common::{grid, rel, smooth_field};
use gkp_core::functionals::*;
use gkp_core::{Error, Field, PhysicalParams, Spectral};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // R_{b,d} − R_{b,d−1} = ‖∂⁻¹u_y‖² − ψ₁μ₁K₁ − ψ₂μ₂K₂
    #[test]
    fn r_difference_identity(seed in any::<u64>(), b in 0.0f64..5.0, d in 1.0f64..6.0,
                             alpha in 0.5f64..2.0, p1 in 1.5f64..5.0, p2 in 1.5f64..5.0,
                             mu1 in -2.0f64..2.0, mu2 in -2.0f64..2.0) {
        let sp = Spectral::new(grid(32, 24.0), alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = smooth_field(&sp, &mut rng, 5, 1.5);
        let p = PhysicalParams { alpha, p1, p2, mu1, mu2, eps: -1.0 };
        let lhs = r_bd(&sp, &u, &p, b, d).unwrap() - r_bd(&sp, &u, &p, b, d - 1.0).unwrap();
        let n = norms(&sp, &u, &p).unwrap();
        let rhs = n.dinv_y_sq - psi_of(p1) * mu1 * n.k1 - psi_of(p2) * mu2 * n.k2;
        let scale = n.dinv_y_sq + (psi_of(p1) * mu1 * n.k1).abs() + (psi_of(p2) * mu2 * n.k2).abs();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0), "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn quotient_is_amplitude_invariant(seed in any::<u64>(), lambda in 0.1f64..10.0, p in 1.5f64..4.0) {
        let sp = Spectral::new(grid(32, 24.0), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = smooth_field(&sp, &mut rng, 5, 1.0);
        let a = sobolev_quotient(&sp, &u, p, 1.0).unwrap();
        let b = sobolev_quotient(&sp, &u.scaled(lambda), p, 1.0).unwrap();
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn nehari_is_twice_i_minus_n(seed in any::<u64>(), mu1 in -1.0f64..1.0, mu2 in -1.0f64..1.0) {
        let sp = Spectral::new(grid(32, 24.0), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = smooth_field(&sp, &mut rng, 5, 1.0);
        let p = PhysicalParams { alpha: 1.0, p1: 2.0, p2: 3.0, mu1, mu2, eps: -1.0 };
        let i = i_func(&sp, &u, &p).unwrap();
        let lhs = nehari(&sp, &u, &p).unwrap();
        prop_assert!((lhs - (2.0 * i - n_func(&u, &p))).abs() < 1e-12 * i.max(1.0));
    }
}

fn psi_of(p: f64) -> f64 {
    gkp_core::params::psi(p)
}

#[test]
fn single_mode_norms_match_closed_forms() {
    let l = 2.0 * PI * 5.0;
    let g = grid(64, l);
    let (k, m) = (3.0 / 5.0, 2.0 / 5.0);
    for alpha in [0.5, 1.0, 1.5] {
        let sp = Spectral::new(g, alpha).unwrap();
        let u = Field::from_fn(g, |x, y| (k * x).cos() * (m * y).cos());
        let p = PhysicalParams::single(alpha, 3.0, 1.0);
        let n = norms(&sp, &u, &p).unwrap();
        let area = l * l;
        assert!(rel(n.mass, area / 4.0) < 1e-12);
        assert!(rel(n.dalpha_sq, k.powf(2.0 * alpha) * area / 4.0) < 1e-12);
        assert!(rel(n.dinv_y_sq, (m / k).powi(2) * area / 4.0) < 1e-12);
        // ∫cos⁴(kx)cos⁴(my) = (3/8)² area
        assert!(rel(n.k1, 9.0 / 64.0 * area / 4.0) < 1e-12);
        assert!(n.momentum.abs() < 1e-10);
    }
}

#[test]
fn energy_sign_follows_eps() {
    let sp = Spectral::new(grid(32, 24.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = smooth_field(&sp, &mut rng, 5, 0.1);
    let mut p = PhysicalParams::linear(1.0, -1.0);
    let n = norms(&sp, &u, &p).unwrap();
    assert!(rel(n.energy(&p), 0.5 * (n.dalpha_sq + n.dinv_y_sq)) < 1e-14);
    p.eps = 1.0;
    assert!(rel(n.energy(&p), 0.5 * (n.dalpha_sq - n.dinv_y_sq)) < 1e-14);
}

#[test]
fn degenerate_quotient_is_an_error() {
    let g = grid(32, 2.0 * PI);
    let sp = Spectral::new(g, 1.0).unwrap();
    // No y-dependence: ‖∂⁻¹u_y‖ = 0.
    let u = Field::from_fn(g, |x, _| x.sin());
    assert_eq!(sobolev_quotient(&sp, &u, 2.0, 1.0), Err(Error::DegenerateField));
}

#[test]
fn sharp_constant_check_rejects_inconsistent_inputs() {
    let s = sharp_constant_forms(1.0, 1.0, 2.0, 1.0);
    assert!(s.rel_diff > 1e-3);
    assert!(matches!(sharp_constant(1.0, 1.0, 2.0, 1.0), Err(Error::InconsistentGroundState { .. })));
}

#[test]
fn diagnostics_columns_line_up() {
    let sp = Spectral::new(grid(32, 24.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = smooth_field(&sp, &mut rng, 5, 1.0);
    let p = PhysicalParams::default();
    let d = diagnostics(&sp, &u, &p).unwrap();
    let v = d.values();
    assert_eq!(v.len(), DiagnosticsRecord::COLUMNS.len());
    assert_eq!(v[0], d.mass);
    assert_eq!(v[13], d.sup_norm);
    assert!(rel(d.x_norm_sq, d.xdot_norm_sq + d.mass) < 1e-15);
}
