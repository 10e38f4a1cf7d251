mod common;

use common::{grid, rel, smooth_field};
use gkp_core::fft::{FftPlan, RealFft2};
use gkp_core::{Complex64, Error, Field, Spectral};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

fn random_complex(n: usize, seed: u64) -> Vec<Complex64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_matches_rustfft(n in 1usize..200, seed in any::<u64>()) {
        let x = random_complex(n, seed);
        let mut ours = x.clone();
        FftPlan::new(n).forward(&mut ours);
        let mut theirs: Vec<rustfft::num_complex::Complex64> =
            x.iter().map(|z| rustfft::num_complex::Complex64::new(z.re, z.im)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut theirs);
        let err = ours.iter().zip(&theirs).map(|(a, b)| ((a.re - b.re).powi(2) + (a.im - b.im).powi(2)).sqrt()).fold(0.0, f64::max);
        prop_assert!(err < 1e-11 * n as f64, "n={n} err={err:e}");
    }

    #[test]
    fn inverse_undoes_forward(n in 1usize..200, seed in any::<u64>()) {
        let x = random_complex(n, seed);
        let mut y = x.clone();
        let plan = FftPlan::new(n);
        plan.forward(&mut y);
        plan.inverse(&mut y);
        let err = x.iter().zip(&y).map(|(a, b)| (a * n as f64 - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10 * n as f64);
    }

    #[test]
    fn real_2d_round_trip(nx in prop::sample::select(vec![4usize, 6, 8, 12, 16, 32]),
                          ny in prop::sample::select(vec![4usize, 6, 8, 10, 16, 32]),
                          seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..nx * ny).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let fft = RealFft2::new(nx, ny);
        let mut spec = vec![Complex64::new(0.0, 0.0); fft.spectrum_len()];
        fft.forward(&v, &mut spec);
        let mut back = vec![0.0; nx * ny];
        let defect = fft.inverse(&spec, &mut back);
        prop_assert!(defect < 1e-12);
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn parseval_holds(seed in any::<u64>()) {
        let sp = Spectral::new(grid(32, 20.0), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = smooth_field(&sp, &mut rng, 6, 1.0);
        let spec = sp.transform(&u).unwrap();
        let phys = u.dot(&u);
        prop_assert!(rel(sp.parseval_l2_sq(&spec), phys) < 1e-12);
    }
}

#[test]
fn real_2d_matches_rustfft_full_transform() {
    use rand::Rng;
    let (nx, ny) = (12, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v: Vec<f64> = (0..nx * ny).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let fft = RealFft2::new(nx, ny);
    let mut spec = vec![Complex64::new(0.0, 0.0); fft.spectrum_len()];
    fft.forward(&v, &mut spec);

    // Full 2D DFT with rustfft, rows then columns.
    let mut planner = FftPlanner::new();
    let mut full: Vec<rustfft::num_complex::Complex64> =
        v.iter().map(|&x| rustfft::num_complex::Complex64::new(x, 0.0)).collect();
    let py = planner.plan_fft_forward(ny);
    for row in full.chunks_mut(ny) {
        py.process(row);
    }
    let px = planner.plan_fft_forward(nx);
    for k in 0..ny {
        let mut col: Vec<_> = (0..nx).map(|j| full[j * ny + k]).collect();
        px.process(&mut col);
        for j in 0..nx {
            full[j * ny + k] = col[j];
        }
    }
    let nyh = ny / 2 + 1;
    for j in 0..nx {
        for k in 0..nyh {
            let a = spec[j * nyh + k];
            let b = full[j * ny + k];
            assert!((a.re - b.re).abs() < 1e-11 && (a.im - b.im).abs() < 1e-11, "({j},{k}): {a} vs {b}");
        }
    }
}

#[test]
fn derivatives_of_single_modes_are_exact() {
    let g = grid(64, 2.0 * std::f64::consts::PI * 4.0);
    let sp = Spectral::new(g, 1.0).unwrap();
    let (k, l) = (3.0 / 4.0, 2.0 / 4.0);
    let u = Field::from_fn(g, |x, y| (k * x).sin() * (l * y).cos());
    let ux = sp.dx(&u).unwrap();
    let uy = sp.dy(&u).unwrap();
    let inv = sp.antideriv_x(&u).unwrap();
    for ix in 0..64 {
        for iy in 0..64 {
            let (x, y) = (g.x(ix), g.y(iy));
            assert!((ux.at(ix, iy) - k * (k * x).cos() * (l * y).cos()).abs() < 1e-12);
            assert!((uy.at(ix, iy) + l * (k * x).sin() * (l * y).sin()).abs() < 1e-12);
            assert!((inv.at(ix, iy) + (k * x).cos() * (l * y).cos() / k).abs() < 1e-12);
        }
    }
}

#[test]
fn fractional_derivative_scales_modes() {
    let g = grid(32, 2.0 * std::f64::consts::PI);
    let sp = Spectral::new(g, 0.75).unwrap();
    for s in [0.5, 1.5, 2.0] {
        let u = Field::from_fn(g, |x, y| (5.0 * x).cos() * (2.0 * y).sin());
        let d = sp.dx_frac(&u, s).unwrap();
        let f = 5f64.powf(s);
        for (a, b) in d.values().iter().zip(u.values()) {
            assert!((a - f * b).abs() < 1e-11 * f);
        }
    }
}

#[test]
fn antiderivative_rejects_nonzero_x_mean() {
    let g = grid(32, 10.0);
    let sp = Spectral::new(g, 1.0).unwrap();
    let u = Field::from_fn(g, |x, y| (-(x * x + y * y)).exp());
    assert!(matches!(sp.antideriv_x(&u), Err(Error::NonZeroXMean { .. })));
    let p = sp.project_zero_xmean(&u).unwrap();
    assert!(sp.max_line_mean(&p) < 1e-15);
    assert!(sp.antideriv_x(&p).is_ok());
}

#[test]
fn antiderivative_inverts_dx() {
    let sp = Spectral::new(grid(64, 30.0), 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u = smooth_field(&sp, &mut rng, 8, 1.0);
    let back = sp.dx(&sp.antideriv_x(&u).unwrap()).unwrap();
    let err = u.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-12 * u.sup_norm().max(1.0));
}

#[test]
fn dealias_keeps_two_thirds_band() {
    let g = grid(48, 48.0);
    let sp = Spectral::new(g, 1.0).unwrap();
    let low = Field::from_fn(g, |x, _| (2.0 * std::f64::consts::PI * 16.0 * x / 48.0).cos());
    let high = Field::from_fn(g, |x, _| (2.0 * std::f64::consts::PI * 17.0 * x / 48.0).cos());
    assert!(rel(sp.dealias(&low).unwrap().l2(), low.l2()) < 1e-12);
    assert!(sp.dealias(&high).unwrap().sup_norm() < 1e-12);
}

#[test]
fn invalid_grids_are_rejected() {
    assert!(matches!(gkp_core::GridSpec::square(0, 1.0), Err(Error::InvalidParams { .. })));
    assert!(matches!(gkp_core::GridSpec::square(16, -1.0), Err(Error::InvalidParams { .. })));
    assert!(Spectral::new(grid(16, 1.0), 0.0).is_err());
}
