use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{norms_from_spectrum, Norms};
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalizedFlowConfig {
    /// Initial pseudo-time step.
    pub tau: f64,
    /// Target for `‖E'(u) − λu‖`, λ the mass multiplier.
    pub tol: f64,
    pub max_iter: usize,
    /// The flow is declared divergent once E drops below this value.
    pub energy_floor: f64,
    pub dealias: bool,
}

impl Default for NormalizedFlowConfig {
    fn default() -> Self {
        NormalizedFlowConfig { tau: 1.0, tol: 1e-8, max_iter: 5000, energy_floor: -1e4, dealias: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedResult {
    pub profile: Field,
    pub mass: f64,
    /// E at the output, the candidate for `d_ϱ`.
    pub energy: f64,
    /// E of the initial guess after projection onto `M = ϱ`.
    pub initial_energy: f64,
    /// Lagrange multiplier λ in `E'(u) = λu`.
    pub multiplier: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub norms: Norms,
}

/// Minimizes E on `{M(u) = ϱ}` by the semi-implicit gradient flow
/// `(1 + τA)û⁺ = û + τ Π f̂(u)`, `A = |ξ|^{2α} − εη²/ξ²`, followed by
/// renormalization to mass ϱ. τ is halved whenever E would increase.
///
/// `init` defaults to the ground state of the critical single power
/// `p = s_c`, rescaled to mass ϱ. Iterations that end without reaching `tol`
/// are returned with `converged = false`; E never ends above the
/// projected initial energy either way.
pub fn normalized_ground_state(
    sp: &Spectral,
    params: &PhysicalParams,
    rho: f64,
    init: Option<&Field>,
    cfg: &NormalizedFlowConfig,
) -> Result<NormalizedResult> {
    params.validate()?;
    if !(rho > 0.0) {
        return Err(Error::InvalidParams { field: "solver.rho", reason: "must be positive" });
    }
    if !(cfg.tau > 0.0) || cfg.max_iter == 0 {
        return Err(Error::InvalidParams { field: "solver.tau", reason: "must be positive" });
    }
    let g = *sp.grid();
    let nyh = g.nyh();
    let sym = &sp.symbols;
    let mut a = vec![0.0; g.spectrum_len()];
    let mut keep = vec![false; g.spectrum_len()];
    for j in 0..g.nx {
        let xi = sym.xi[j];
        if xi == 0.0 {
            continue;
        }
        for k in 0..nyh {
            let i = j * nyh + k;
            let eta = sym.eta[k];
            a[i] = sym.xi_abs_2a[j] - params.eps * eta * eta / (xi * xi);
            keep[i] = !cfg.dealias || sym.dealias_mask[i];
        }
    }
    let restrict = |s: &mut [C64]| {
        for (z, &k) in s.iter_mut().zip(&keep) {
            if !k {
                *z = C64::new(0.0, 0.0);
            }
        }
    };

    let seed = match init {
        Some(f) => f.clone(),
        None => {
            let critical = PhysicalParams::single(params.alpha, params.s_c(), 1.0);
            let pcfg = super::PetviashviliConfig { tol: 1e-8, ..Default::default() };
            super::petviashvili_general(sp, &critical, 1.0, None, &pcfg)?.profile
        }
    };
    let mut uhat = sp.transform(&seed)?;
    restrict(&mut uhat);
    let scale = g.cell_area() / g.len() as f64;
    let mass_of = |s: &[C64]| sp.spectral_energy(s) * scale;
    let normalize = |s: &mut [C64]| -> Result<()> {
        let m = mass_of(s);
        if !(m > 1e-300) {
            return Err(Error::CollapseToZero);
        }
        let l = libm::sqrt(rho / m);
        s.iter_mut().for_each(|z| *z *= l);
        Ok(())
    };
    normalize(&mut uhat)?;

    let mut values = vec![0.0; g.len()];
    let mut fv = vec![0.0; g.len()];
    let mut fhat = sp.zero_spectrum();
    let eval = |s: &[C64], values: &mut Vec<f64>| -> Norms {
        sp.inverse_values(s, values);
        norms_from_spectrum(sp, s, values, params)
    };

    let mut n = eval(&uhat, &mut values);
    let initial_energy = n.energy(params);
    let mut energy = initial_energy;
    let mut tau = cfg.tau;
    let mut grad = f64::INFINITY;
    let mut multiplier = 0.0;
    let mut iterations = 0;
    let mut candidate = uhat.clone();

    for it in 0..cfg.max_iter {
        iterations = it;
        for (o, &v) in fv.iter_mut().zip(&values) {
            *o = params.f(v);
        }
        sp.forward_values(&fv, &mut fhat);
        restrict(&mut fhat);
        // E'(u) = Au − Πf(u); λ = ⟨E'(u), u⟩/M.
        let mut num = 0.0;
        for i in 0..uhat.len() {
            let w = if i % nyh == 0 || i % nyh == nyh - 1 { 1.0 } else { 2.0 };
            let e = uhat[i] * a[i] - fhat[i];
            num += w * (e.conj() * uhat[i]).re;
        }
        multiplier = num * scale / rho;
        let mut gsq = 0.0;
        for i in 0..uhat.len() {
            let w = if i % nyh == 0 || i % nyh == nyh - 1 { 1.0 } else { 2.0 };
            let e = uhat[i] * a[i] - fhat[i] - uhat[i] * multiplier;
            gsq += w * e.norm_sqr();
        }
        grad = libm::sqrt(gsq * scale);
        if grad <= cfg.tol {
            break;
        }
        loop {
            for i in 0..uhat.len() {
                candidate[i] = if keep[i] {
                    // Negative parts of A (ε = +1) are taken explicitly.
                    let (ap, an) = (a[i].max(0.0), a[i].min(0.0));
                    (uhat[i] * (1.0 - tau * an) + fhat[i] * tau) / (1.0 + tau * ap)
                } else {
                    C64::new(0.0, 0.0)
                };
            }
            normalize(&mut candidate)?;
            let cn = eval(&candidate, &mut values);
            let ce = cn.energy(params);
            if ce <= energy + 1e-14 * energy.abs().max(1.0) {
                uhat.copy_from_slice(&candidate);
                n = cn;
                energy = ce;
                tau = (tau * 1.25).min(cfg.tau * 64.0);
                break;
            }
            tau *= 0.5;
            if tau < 1e-14 {
                // No descent direction left at this resolution.
                sp.inverse_values(&uhat, &mut values);
                return finish(sp, uhat, values, n, energy, initial_energy, multiplier, grad, it, false);
            }
        }
        if !energy.is_finite() || energy < cfg.energy_floor {
            return Err(Error::FlowDiverges { energy });
        }
    }
    sp.inverse_values(&uhat, &mut values);
    let converged = grad <= cfg.tol;
    finish(sp, uhat, values, n, energy, initial_energy, multiplier, grad, iterations, converged)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    sp: &Spectral,
    uhat: Vec<C64>,
    values: Vec<f64>,
    norms: Norms,
    energy: f64,
    initial_energy: f64,
    multiplier: f64,
    gradient_norm: f64,
    iterations: usize,
    converged: bool,
) -> Result<NormalizedResult> {
    let profile = crate::field::Field::with_spectrum(*sp.grid(), values, uhat);
    Ok(NormalizedResult {
        profile,
        mass: norms.mass,
        energy,
        initial_energy,
        multiplier,
        gradient_norm,
        iterations,
        converged,
        norms,
    })
}
