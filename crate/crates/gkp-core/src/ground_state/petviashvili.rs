use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use super::{GroundStateResult, PetviashviliConfig, ProfileOperator};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

/// Rational lump-shaped seed `4(1 − x² + y²)/(1 + x² + y²)²`; its x-mean
/// vanishes in the continuum.
pub fn lump_seed(grid: GridSpec) -> Field {
    Field::from_fn(grid, |x, y| {
        let r = 1.0 + x * x + y * y;
        4.0 * (1.0 - x * x + y * y) / (r * r)
    })
}

/// Ground state of `D_x^{2α}φ + ∂_x^{-2}φ_yy + φ = |φ|^{p−1}φ`.
pub fn petviashvili(p: f64, alpha: f64, grid: GridSpec, cfg: &PetviashviliConfig) -> Result<GroundStateResult> {
    let params = PhysicalParams::single(alpha, p, 1.0);
    params.validate()?;
    let sp = Spectral::new(grid, alpha)?;
    petviashvili_general(&sp, &params, 1.0, None, cfg)
}

/// Exponent used for the stabilizing factor when `gamma` is not given.
fn default_gamma(params: &PhysicalParams) -> f64 {
    let p = if params.mu2 == 0.0 || params.p1 == params.p2 {
        params.p1
    } else if params.mu1 > 0.0 && params.mu2 > 0.0 {
        params.p1.max(params.p2)
    } else if params.mu2 > 0.0 {
        params.p2
    } else {
        params.p1
    };
    p / (p - 1.0)
}

/// Petviashvili iteration `v̂ ← s^γ Π f̂(v)/L̂`, `s = ⟨Lv, v⟩/⟨f(v), v⟩`,
/// for any speed and nonlinearity. `init` defaults to [`lump_seed`].
pub fn petviashvili_general(
    sp: &Spectral,
    params: &PhysicalParams,
    speed: f64,
    init: Option<&Field>,
    cfg: &PetviashviliConfig,
) -> Result<GroundStateResult> {
    params.validate()?;
    cfg.validate()?;
    if !(speed > 0.0) {
        return Err(Error::InvalidParams { field: "solver.speed", reason: "must be positive" });
    }
    let gamma = cfg.gamma.unwrap_or_else(|| default_gamma(params));
    let mut op = ProfileOperator::new(sp, *params, speed, cfg.dealias);
    let seed = match init {
        Some(f) => f.clone(),
        None => lump_seed(*sp.grid()),
    };
    let mut uhat = sp.transform(&seed)?;
    op.restrict(&mut uhat);
    let mut fhat = sp.zero_spectrum();
    let mut history = Vec::new();
    let r = cfg.relaxation;

    for it in 0..cfg.max_iter {
        let norm = libm::sqrt(op.inner(&uhat, &uhat));
        if !(norm > 1e-12) {
            return Err(Error::CollapseToZero);
        }
        op.nonlinear(&uhat, &mut fhat);
        let residual = op.residual(&uhat, &fhat);
        history.push(residual);
        if !residual.is_finite() {
            return Err(Error::NoConvergence { iterations: it, residual });
        }
        if residual <= cfg.tol {
            return op.finish(uhat, residual, it, history, cfg);
        }
        let num = op.energy_form(&uhat);
        let den = op.inner(&uhat, &fhat);
        if !(den > 0.0) {
            // ⟨f(v), v⟩ ≤ 0: the nonlinearity is defocusing on this iterate.
            return Err(Error::CollapseToZero);
        }
        let s = libm::pow(num / den, gamma);
        for ((u, f), l) in uhat.iter_mut().zip(&fhat).zip(&op.lhat) {
            let next = if *l > 0.0 { f * (s / l) } else { C64::new(0.0, 0.0) };
            *u = *u * (1.0 - r) + next * r;
        }
    }
    op.nonlinear(&uhat, &mut fhat);
    let residual = op.residual(&uhat, &fhat);
    Err(Error::NoConvergence { iterations: cfg.max_iter, residual })
}
