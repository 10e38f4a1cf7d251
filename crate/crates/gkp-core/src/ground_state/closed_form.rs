//! Explicit reference profiles.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::field::Field;
use crate::grid::GridSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct GardnerSoliton {
    pub profile: Vec<f64>,
    /// `A·B₀`.
    pub speed: f64,
    /// `R = ±√(1 − 6ςA)`.
    pub r: f64,
}

/// `u(x) = 6A / (1 + R cosh(√A (x − x₀)))`, `R = ±√(1 − 6ςA)`, at t = 0.
///
/// The profile solves `−cU + B₀U'' + U²/2 − ςU³/3 = 0` with `c = A` when
/// `B₀ = 1`; for other B₀ the width would have to be `√(A/B₀)`, so only
/// `B₀ = 1` gives an exact traveling wave. `negative_branch` selects
/// `R < 0`, which is singular where `R cosh = −1`.
pub fn gardner_soliton_1d(
    a: f64,
    varsigma: f64,
    b0: f64,
    x0: f64,
    xs: &[f64],
    negative_branch: bool,
) -> Result<GardnerSoliton> {
    if !(a > 0.0) {
        return Err(Error::InvalidParams { field: "gardner.a", reason: "must be positive" });
    }
    let disc = 1.0 - 6.0 * varsigma * a;
    if !(disc >= 0.0) {
        return Err(Error::InvalidParams { field: "gardner.varsigma", reason: "1 - 6*varsigma*A must be >= 0" });
    }
    let r = if negative_branch { -libm::sqrt(disc) } else { libm::sqrt(disc) };
    let k = libm::sqrt(a);
    let profile = xs.iter().map(|&x| 6.0 * a / (1.0 + r * libm::cosh(k * (x - x0)))).collect();
    Ok(GardnerSoliton { profile, speed: a * b0, r })
}

/// Max of `|−cU + B₀U'' + U²/2 − ςU³/3|` with U'' taken spectrally on a
/// periodic grid of the given length.
pub fn gardner_residual(u: &[f64], length: f64, speed: f64, b0: f64, varsigma: f64) -> f64 {
    let n = u.len();
    let plan = FftPlan::new(n);
    let mut z: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
    plan.forward(&mut z);
    for (j, c) in z.iter_mut().enumerate() {
        let m = crate::grid::signed_mode(j, n);
        let k = if 2 * j == n { 0.0 } else { 2.0 * PI * m as f64 / length };
        *c *= -k * k / n as f64;
    }
    plan.inverse(&mut z);
    u.iter()
        .zip(&z)
        .map(|(&v, d2)| (-speed * v + b0 * d2.re + 0.5 * v * v - varsigma * v * v * v / 3.0).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZaitsevProfile {
    pub field: Field,
    /// `β₀²(4 − β²)/(1 − β²)`.
    pub speed: f64,
    /// The y-wavenumber actually used (a multiple of 2π/Ly).
    pub delta: f64,
    pub min_denominator: f64,
}

/// `ψ = 12β₀² (1 − β cosh(β₀x) cos(δy)) / (cosh(β₀x) − β cos(δy))²` at t = 0.
///
/// δ is snapped to the nearest nonzero multiple of 2π/Ly so the profile is
/// periodic in the box.
pub fn zaitsev_profile(beta0: f64, beta: f64, delta: f64, grid: GridSpec) -> Result<ZaitsevProfile> {
    grid.validate()?;
    if !(beta0 > 0.0) {
        return Err(Error::InvalidParams { field: "zaitsev.beta0", reason: "must be positive" });
    }
    if !(beta.abs() < 1.0) {
        return Err(Error::InvalidParams { field: "zaitsev.beta", reason: "must lie in (-1, 1)" });
    }
    let unit = 2.0 * PI / grid.ly;
    let delta = libm::round(delta.abs() / unit).max(1.0) * unit;
    let mut min_den = f64::INFINITY;
    for ix in 0..grid.nx {
        let ch = libm::cosh(beta0 * grid.x(ix));
        for iy in 0..grid.ny {
            min_den = min_den.min((ch - beta * libm::cos(delta * grid.y(iy))).abs());
        }
    }
    if min_den < 1e-6 {
        return Err(Error::NearSingular { min_denominator: min_den });
    }
    let field = Field::from_fn(grid, |x, y| {
        let ch = libm::cosh(beta0 * x);
        let cy = libm::cos(delta * y);
        let den = ch - beta * cy;
        12.0 * beta0 * beta0 * (1.0 - beta * ch * cy) / (den * den)
    });
    let speed = beta0 * beta0 * (4.0 - beta * beta) / (1.0 - beta * beta);
    Ok(ZaitsevProfile { field, speed, delta, min_denominator: min_den })
}
