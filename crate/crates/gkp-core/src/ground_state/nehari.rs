use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use super::{petviashvili_general, GroundStateResult, PetviashviliConfig, ProfileOperator};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::{abs_pow, PhysicalParams};
use crate::spectral::Spectral;

/// Smallest λ > 0 with `P(λu) = 0`, given `I(u)` and the unweighted
/// `K_j(u)`.
///
/// `P(λu) = λ² g(λ)`, `g(λ) = 2I − Σ μ_j (p_j+1) K_j λ^{p_j−1}`. The scan runs
/// over `ln λ ∈ [−20, 20]` in steps of 0.1 and the first sign change is
/// bisected to 1e−14 in `ln λ`.
pub fn nehari_scale(i_value: f64, k1: f64, k2: f64, params: &PhysicalParams) -> Result<f64> {
    let g = |t: f64| {
        let l = libm::exp(t);
        2.0 * i_value
            - params.mu1 * (params.p1 + 1.0) * k1 * libm::pow(l, params.p1 - 1.0)
            - params.mu2 * (params.p2 + 1.0) * k2 * libm::pow(l, params.p2 - 1.0)
    };
    if !(i_value > 0.0) {
        return Err(Error::NoNehariRoot);
    }
    let mut lo = -20.0;
    let mut glo = g(lo);
    if !(glo > 0.0) {
        return Err(Error::NoNehariRoot);
    }
    let mut step = 0;
    let mut hi;
    loop {
        step += 1;
        hi = -20.0 + 0.1 * step as f64;
        if hi > 20.0 + 1e-12 {
            return Err(Error::NoNehariRoot);
        }
        let ghi = g(hi);
        if ghi <= 0.0 {
            break;
        }
        lo = hi;
        glo = ghi;
    }
    let _ = glo;
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(libm::exp(0.5 * (lo + hi)))
}

fn check_alpha(sp: &Spectral, params: &PhysicalParams) -> Result<()> {
    if sp.symbols.alpha != params.alpha {
        return Err(Error::InvalidParams { field: "params.alpha", reason: "differs from the spectral tables" });
    }
    Ok(())
}

/// Default starting profile: the single-power ground state of the dominant
/// focusing term.
fn dominant_seed(sp: &Spectral, params: &PhysicalParams, speed: f64, cfg: &PetviashviliConfig) -> Result<Field> {
    let p = if params.mu2 > 0.0 && (params.p2 > params.p1 || params.mu1 <= 0.0) { params.p2 } else { params.p1 };
    let single = PhysicalParams::single(params.alpha, p, 1.0);
    let seed_cfg = PetviashviliConfig { tol: cfg.tol.max(1e-6), gamma: None, relaxation: 1.0, ..*cfg };
    Ok(petviashvili_general(sp, &single, speed, None, &seed_cfg)?.profile)
}

/// Minimizes the action on the Nehari manifold.
///
/// Each sweep takes a preconditioned gradient step
/// `u ← (1−τ)u + τ L^{-1}Πf(u)` (τ = `cfg.relaxation`), i.e. a step along
/// the X_α-gradient of S, and then rescales `u ← λu` onto `P = 0`. It stops
/// when `‖Lu − Πf(u)‖ ≤ tol`.
pub fn nehari_ground_state(
    sp: &Spectral,
    params: &PhysicalParams,
    init: Option<&Field>,
    cfg: &PetviashviliConfig,
) -> Result<GroundStateResult> {
    descend(sp, params, 1.0, init, cfg)
}

/// Same contract as [`nehari_ground_state`] for the speed-c equation
/// `(c v + D_x^{2α}v − f(v))_xx + v_yy = 0`.
pub fn speed_c_ground_state(
    sp: &Spectral,
    c: f64,
    params: &PhysicalParams,
    init: Option<&Field>,
    cfg: &PetviashviliConfig,
) -> Result<GroundStateResult> {
    descend(sp, params, c, init, cfg)
}

fn descend(
    sp: &Spectral,
    params: &PhysicalParams,
    speed: f64,
    init: Option<&Field>,
    cfg: &PetviashviliConfig,
) -> Result<GroundStateResult> {
    params.validate()?;
    cfg.validate()?;
    check_alpha(sp, params)?;
    if !(speed > 0.0) {
        return Err(Error::InvalidParams { field: "solver.speed", reason: "must be positive" });
    }
    if params.mu1 <= 0.0 && params.mu2 <= 0.0 {
        return Err(Error::InvalidParams { field: "params.mu", reason: "at least one coefficient must be positive" });
    }
    let seed = match init {
        Some(f) => f.clone(),
        None => dominant_seed(sp, params, speed, cfg)?,
    };
    let mut op = ProfileOperator::new(sp, *params, speed, cfg.dealias);
    let mut uhat = sp.transform(&seed)?;
    op.restrict(&mut uhat);
    let mut fhat = sp.zero_spectrum();
    let mut buf = vec![0.0; sp.grid().len()];
    let mut history = Vec::new();
    let tau = cfg.relaxation;

    project_onto_nehari(&op, &mut uhat, &mut buf)?;
    for it in 0..cfg.max_iter {
        op.nonlinear(&uhat, &mut fhat);
        let residual = op.residual(&uhat, &fhat);
        history.push(residual);
        if !residual.is_finite() {
            return Err(Error::NoConvergence { iterations: it, residual });
        }
        if residual <= cfg.tol {
            return op.finish(uhat, residual, it, history, cfg);
        }
        for ((u, f), l) in uhat.iter_mut().zip(&fhat).zip(&op.lhat) {
            let next = if *l > 0.0 { f / l } else { C64::new(0.0, 0.0) };
            *u = *u * (1.0 - tau) + next * tau;
        }
        project_onto_nehari(&op, &mut uhat, &mut buf)?;
    }
    op.nonlinear(&uhat, &mut fhat);
    let residual = op.residual(&uhat, &fhat);
    Err(Error::NoConvergence { iterations: cfg.max_iter, residual })
}

fn project_onto_nehari(op: &ProfileOperator<'_>, uhat: &mut [C64], buf: &mut [f64]) -> Result<()> {
    let i_value = 0.5 * op.energy_form(uhat);
    if !(i_value > 1e-24) {
        return Err(Error::CollapseToZero);
    }
    op.sp.inverse_values(uhat, buf);
    let p = &op.params;
    let area = op.sp.grid().cell_area();
    let k1 = buf.iter().map(|&v| abs_pow(v, p.p1 + 1.0)).sum::<f64>() * area / (p.p1 + 1.0);
    let k2 = buf.iter().map(|&v| abs_pow(v, p.p2 + 1.0)).sum::<f64>() * area / (p.p2 + 1.0);
    let lambda = nehari_scale(i_value, k1, k2, p)?;
    uhat.iter_mut().for_each(|z| *z *= lambda);
    Ok(())
}
