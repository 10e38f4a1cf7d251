mod common;

use common::{grid, rel, smooth_field};
use gkp_core::functionals::{norms, quotient_from_norms, sharp_constant_forms, sobolev_quotient};
use gkp_core::ground_state::*;
use gkp_core::{Error, Field, PhysicalParams, Spectral};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn kp2() -> PhysicalParams {
    PhysicalParams::single(1.0, 2.0, 1.0)
}

#[test]
fn petviashvili_converges_to_a_positive_lump() {
    let g = grid(256, 64.0);
    let gs = petviashvili(2.0, 1.0, g, &PetviashviliConfig::default()).unwrap();
    assert!(gs.converged && gs.residual_norm < 1e-8);
    assert!(gs.monotone_after(gs.iterations / 2));
    assert_eq!(gs.polarity(), 1.0);
    // Any fixed point satisfies the Nehari identity up to the residual.
    assert!(gs.nehari().abs() < 1e-8 * gs.i_value());
    // y ↦ −y symmetry of the equation is inherited by the profile.
    let n = g.ny;
    let mut asym: f64 = 0.0;
    for ix in 0..g.nx {
        for iy in 1..n {
            asym = asym.max((gs.profile.at(ix, iy) - gs.profile.at(ix, n - iy)).abs());
        }
    }
    assert!(asym < 1e-8 * gs.profile.sup_norm());
}

// The profile decays like 1/r², so box truncation shifts the integrals at
// O(L⁻²): doubling L should shrink successive action differences about 4×.
#[test]
fn box_error_decays_like_inverse_square() {
    let cfg = PetviashviliConfig::default();
    let s: Vec<f64> = [(128, 32.0), (256, 64.0), (512, 128.0)]
        .iter()
        .map(|&(n, l)| petviashvili(2.0, 1.0, grid(n, l), &cfg).unwrap().action_value)
        .collect();
    let ratio = (s[0] - s[1]).abs() / (s[1] - s[2]).abs();
    assert!(ratio > 3.0 && ratio < 5.0, "successive-difference ratio {ratio}");
}

#[test]
fn nehari_descent_agrees_with_petviashvili() {
    let sp = Spectral::new(grid(128, 48.0), 1.0).unwrap();
    let cfg = PetviashviliConfig::default();
    let a = petviashvili_general(&sp, &kp2(), 1.0, None, &cfg).unwrap();
    let b = nehari_ground_state(&sp, &kp2(), None, &cfg).unwrap();
    assert!(rel(a.action_value, b.action_value) < 1e-8);
    assert!(b.nehari().abs() < 1e-8 * b.i_value());
}

#[test]
fn sharp_constant_forms_and_quotient_bound() {
    let sp = Spectral::new(grid(256, 64.0), 1.0).unwrap();
    let gs = petviashvili_general(&sp, &kp2(), 1.0, None, &PetviashviliConfig::default()).unwrap();
    let s = sharp_constant_forms(gs.norms.mass, gs.action_value, 2.0, 1.0);
    assert!(s.rel_diff < 1e-2, "{s:?}");
    let at_phi = quotient_from_norms(&gs.norms, 2.0, 1.0).unwrap();
    assert!(rel(at_phi, s.rho()) < 1e-2);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let u = smooth_field(&sp, &mut rng, 6, 2.0);
        let q = sobolev_quotient(&sp, &u, 2.0, 1.0).unwrap();
        assert!(q <= s.rho() * (1.0 + 1e-6), "q {q} rho {}", s.rho());
    }
}

#[test]
fn speed_scaling_law_for_the_mass() {
    // φ_c(x, y) = c φ(√c x, c y) for α = 1, p = 2, so M(φ_c) = √c M(φ).
    let sp = Spectral::new(grid(256, 64.0), 1.0).unwrap();
    let cfg = PetviashviliConfig::default();
    let one = petviashvili_general(&sp, &kp2(), 1.0, None, &cfg).unwrap();
    let c = 1.44;
    let fast = speed_c_ground_state(&sp, c, &kp2(), Some(&one.profile), &cfg).unwrap();
    assert!(rel(fast.norms.mass / one.norms.mass, c.sqrt()) < 1e-2);
    assert!(rel(fast.profile.sup_norm() / one.profile.sup_norm(), c) < 1e-2);
}

#[test]
fn d_second_derivative_is_positive_and_stable() {
    let sp = Spectral::new(grid(128, 64.0), 1.0).unwrap();
    let probe = gkp_core::criteria::d_second_derivative(&sp, &kp2(), 0.05, &PetviashviliConfig::default()).unwrap();
    assert!(probe.d2 > 0.0 && probe.d2_half > 0.0);
    assert!(probe.richardson_change < 0.05);
    assert!(probe.residuals.iter().all(|r| *r < 1e-8));
}

#[test]
fn gardner_profiles_solve_the_ode() {
    let n = 4096;
    let l = 600.0;
    let xs: Vec<f64> = (0..n).map(|i| -l / 2.0 + l * i as f64 / n as f64).collect();
    for varsigma in [0.0, 1.0] {
        let s = gardner_soliton_1d(0.1, varsigma, 1.0, 0.0, &xs, false).unwrap();
        let r = gardner_residual(&s.profile, l, s.speed, 1.0, varsigma);
        assert!(r < 1e-6, "varsigma {varsigma}: residual {r:e}");
    }
    // With B₀ ≠ 1 the printed width no longer matches.
    let s = gardner_soliton_1d(0.1, 0.0, 2.0, 0.0, &xs, false).unwrap();
    assert!(gardner_residual(&s.profile, l, s.speed, 2.0, 0.0) > 1e-3);
    assert!(gardner_soliton_1d(0.1, 2.0, 1.0, 0.0, &xs, false).is_err());
}

#[test]
fn zaitsev_profile_snaps_and_guards() {
    let g = grid(64, 40.0);
    let z = zaitsev_profile(1.0, 0.5, 0.3, g).unwrap();
    let unit = 2.0 * PI / 40.0;
    assert!(((z.delta / unit).round() - z.delta / unit).abs() < 1e-12);
    assert!(rel(z.speed, (4.0 - 0.25) / 0.75) < 1e-14);
    assert!(matches!(zaitsev_profile(1.0, 1.0 - 1e-9, 0.3, g), Err(Error::NearSingular { .. })));
}

#[test]
fn normalized_flow_keeps_mass_and_lowers_energy() {
    let sp = Spectral::new(grid(128, 48.0), 1.0).unwrap();
    let cfg = NormalizedFlowConfig { max_iter: 300, ..Default::default() };
    let r = normalized_ground_state(&sp, &kp2(), 30.0, None, &cfg).unwrap();
    assert!(rel(r.mass, 30.0) < 1e-10);
    assert!(r.energy <= r.initial_energy);
    let n = norms(&sp, &r.profile, &kp2()).unwrap();
    assert!(rel(n.energy(&kp2()), r.energy) < 1e-10);
}

#[test]
fn solver_errors() {
    let sp = Spectral::new(grid(64, 32.0), 1.0).unwrap();
    let cfg = PetviashviliConfig::default();
    let zero = Field::zeros(*sp.grid());
    assert_eq!(petviashvili_general(&sp, &kp2(), 1.0, Some(&zero), &cfg).unwrap_err(), Error::CollapseToZero);
    let short = PetviashviliConfig { max_iter: 2, ..cfg };
    assert!(matches!(petviashvili_general(&sp, &kp2(), 1.0, None, &short), Err(Error::NoConvergence { .. })));
    let bad = PhysicalParams { alpha: 0.0, ..kp2() };
    assert!(matches!(
        petviashvili_general(&sp, &bad, 1.0, None, &cfg),
        Err(Error::InvalidParams { field: "params.alpha", .. })
    ));
    let defocusing = PhysicalParams::single(1.0, 2.0, -1.0);
    assert!(matches!(nehari_ground_state(&sp, &defocusing, None, &cfg), Err(Error::InvalidParams { .. })));
    // A box too small for the lump.
    let tiny = Spectral::new(grid(64, 8.0), 1.0).unwrap();
    assert!(matches!(
        petviashvili_general(&tiny, &kp2(), 1.0, None, &cfg),
        Err(Error::BoundaryContamination { .. }) | Err(Error::NoConvergence { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Single power: P(λu) = 0 at λ = (2I/(μ(p+1)K))^{1/(p−1)}.
    #[test]
    fn nehari_scale_matches_closed_form(i in 0.1f64..10.0, k in 0.1f64..10.0, p in 1.5f64..6.0, mu in 0.1f64..3.0) {
        let params = PhysicalParams::single(1.0, p, mu);
        let lam = nehari_scale(i, k, 0.0, &params).unwrap();
        let exact = (2.0 * i / (mu * (p + 1.0) * k)).powf(1.0 / (p - 1.0));
        prop_assert!(rel(lam, exact) < 1e-12);
    }
}
