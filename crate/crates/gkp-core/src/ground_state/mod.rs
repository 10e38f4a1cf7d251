//! Solitary-wave profiles of `(c v + D_x^{2α}v − f(v))_xx + v_yy = 0`.
//!
//! On the Fourier side this is `L̂ v̂ = f̂(v)` with
//! `L̂ = c + |ξ|^{2α} + η²/ξ²`; the ξ = 0 row is excluded (zero x-mean).

mod closed_form;
mod nehari;
mod normalized;
mod petviashvili;

pub use closed_form::{gardner_residual, gardner_soliton_1d, zaitsev_profile, GardnerSoliton, ZaitsevProfile};
pub use nehari::{nehari_ground_state, nehari_scale, speed_c_ground_state};
pub use normalized::{normalized_ground_state, NormalizedFlowConfig, NormalizedResult};
pub use petviashvili::{lump_seed, petviashvili, petviashvili_general};

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{norms_from_spectrum, pohozaev_from_norms, Norms};
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PetviashviliConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Stabilization exponent; `None` means `p/(p−1)` for the dominant power.
    pub gamma: Option<f64>,
    /// Under-relaxation of the update (the step τ of the Nehari descent).
    pub relaxation: f64,
    pub dealias: bool,
    /// Largest accepted boundary/peak ratio of the converged profile.
    pub boundary_threshold: f64,
}

impl Default for PetviashviliConfig {
    fn default() -> Self {
        PetviashviliConfig {
            tol: 1e-10,
            max_iter: 2000,
            gamma: None,
            relaxation: 1.0,
            dealias: true,
            boundary_threshold: 5e-2,
        }
    }
}

impl PetviashviliConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParams { field: "solver.tol", reason: "must be positive" });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParams { field: "solver.maxIter", reason: "must be at least 1" });
        }
        if let Some(g) = self.gamma {
            if !(g > 1.0) {
                return Err(Error::InvalidParams { field: "solver.gamma", reason: "must exceed 1" });
            }
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidParams { field: "solver.relaxation", reason: "must lie in (0, 1]" });
        }
        if !(self.boundary_threshold > 0.0) {
            return Err(Error::InvalidParams { field: "solver.boundaryThreshold", reason: "must be positive" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    pub profile: Field,
    pub params: PhysicalParams,
    /// Wave speed c of the profile equation.
    pub speed: f64,
    /// `‖L v − Π f(v)‖` in L² (retained band only when dealiasing).
    pub residual_norm: f64,
    /// `S_c(φ) = ½(c‖φ‖² + ‖D^αφ‖² + ‖∂_x^{-1}φ_y‖²) − K(φ)`.
    pub action_value: f64,
    pub iterations: usize,
    pub pohozaev_residuals: Vec<f64>,
    pub converged: bool,
    pub norms: Norms,
    pub boundary_ratio: f64,
    pub residual_history: Vec<f64>,
}

impl GroundStateResult {
    /// Whether the residual never increased after iteration `skip`.
    pub fn monotone_after(&self, skip: usize) -> bool {
        self.residual_history.iter().skip(skip).zip(self.residual_history.iter().skip(skip + 1)).all(|(a, b)| b <= a)
    }

    /// Sign of the extremal value of the profile.
    pub fn polarity(&self) -> f64 {
        let e = self.profile.extremum();
        if e < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Nehari functional with the speed-weighted mass.
    pub fn nehari(&self) -> f64 {
        let n = self.norms;
        self.speed * n.mass + n.dalpha_sq + n.dinv_y_sq - n.n_func(&self.params)
    }

    pub fn i_value(&self) -> f64 {
        let n = self.norms;
        0.5 * (self.speed * n.mass + n.dalpha_sq + n.dinv_y_sq)
    }
}

/// `L̂`, the retained-mode set and Parseval weights for one solve.
pub(crate) struct ProfileOperator<'a> {
    pub sp: &'a Spectral,
    pub params: PhysicalParams,
    pub speed: f64,
    pub lhat: Vec<f64>,
    pub keep: Vec<bool>,
    pub weight: Vec<f64>,
    values: Vec<f64>,
}

impl<'a> ProfileOperator<'a> {
    pub fn new(sp: &'a Spectral, params: PhysicalParams, speed: f64, dealias: bool) -> Self {
        let g = *sp.grid();
        let nyh = g.nyh();
        let sym = &sp.symbols;
        let mut lhat = vec![0.0; g.spectrum_len()];
        let mut keep = vec![false; g.spectrum_len()];
        let mut weight = vec![0.0; g.spectrum_len()];
        for j in 0..g.nx {
            let xi = sym.xi[j];
            for k in 0..nyh {
                let i = j * nyh + k;
                weight[i] = if k == 0 || k == nyh - 1 { 1.0 } else { 2.0 };
                if xi == 0.0 {
                    continue;
                }
                let eta = sym.eta[k];
                lhat[i] = speed + sym.xi_abs_2a[j] + eta * eta / (xi * xi);
                keep[i] = !dealias || sym.dealias_mask[i];
            }
        }
        ProfileOperator { sp, params, speed, lhat, keep, weight, values: vec![0.0; g.len()] }
    }

    pub fn restrict(&self, spec: &mut [C64]) {
        for (z, &k) in spec.iter_mut().zip(&self.keep) {
            if !k {
                *z = C64::new(0.0, 0.0);
            }
        }
    }

    /// Physical-space factor of the half-plane Parseval sum.
    pub fn parseval_scale(&self) -> f64 {
        let g = self.sp.grid();
        g.cell_area() / g.len() as f64
    }

    /// `∫ a b` for two spectra of real fields.
    pub fn inner(&self, a: &[C64], b: &[C64]) -> f64 {
        let s: f64 = a.iter().zip(b).zip(&self.weight).map(|((x, y), w)| w * (x.conj() * y).re).sum();
        s * self.parseval_scale()
    }

    /// `⟨L u, u⟩`.
    pub fn energy_form(&self, a: &[C64]) -> f64 {
        let s: f64 = a.iter().zip(&self.lhat).zip(&self.weight).map(|((x, l), w)| w * l * x.norm_sqr()).sum();
        s * self.parseval_scale()
    }

    /// `‖L u − f‖` in L².
    pub fn residual(&self, uhat: &[C64], fhat: &[C64]) -> f64 {
        let s: f64 = uhat
            .iter()
            .zip(fhat)
            .zip(&self.lhat)
            .zip(&self.weight)
            .map(|(((u, f), l), w)| w * (u * l - f).norm_sqr())
            .sum();
        libm::sqrt(s * self.parseval_scale())
    }

    /// Fills `fhat` with the restricted transform of f(u).
    pub fn nonlinear(&mut self, uhat: &[C64], fhat: &mut [C64]) {
        self.sp.inverse_values(uhat, &mut self.values);
        let p = self.params;
        let fv: Vec<f64> = self.values.iter().map(|&v| p.f(v)).collect();
        self.sp.forward_values(&fv, fhat);
        self.restrict(fhat);
    }

    /// Builds the result record from a converged spectrum.
    pub fn finish(
        &self,
        uhat: Vec<C64>,
        residual_norm: f64,
        iterations: usize,
        residual_history: Vec<f64>,
        cfg: &PetviashviliConfig,
    ) -> Result<GroundStateResult> {
        let profile = self.sp.inverse_transform(&uhat)?;
        let norms = norms_from_spectrum(self.sp, &uhat, profile.values(), &self.params);
        let peak = profile.sup_norm();
        if !(peak > 1e-12) {
            return Err(Error::CollapseToZero);
        }
        let boundary_ratio = profile.boundary_sup() / peak;
        if boundary_ratio > cfg.boundary_threshold {
            return Err(Error::BoundaryContamination { ratio: boundary_ratio, threshold: cfg.boundary_threshold });
        }
        // The identities hold for the speed-weighted mass.
        let mut weighted = norms;
        weighted.mass *= self.speed;
        let pohozaev_residuals = pohozaev_from_norms(&weighted, &self.params);
        let action_value =
            0.5 * (self.speed * norms.mass + norms.dalpha_sq + norms.dinv_y_sq) - norms.k_weighted(&self.params);
        Ok(GroundStateResult {
            profile,
            params: self.params,
            speed: self.speed,
            residual_norm,
            action_value,
            iterations,
            pohozaev_residuals,
            converged: true,
            norms,
            boundary_ratio,
            residual_history,
        })
    }
}
