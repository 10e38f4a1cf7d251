//! Scalar functionals. Every integral is a rectangle-rule sum in physical
//! space. `K_j = ∫|u|^{p_j+1}/(p_j+1)` carries no μ; everything that mixes
//! the two powers (energy, N, K̃, R_{b,d}) applies the μ_j weights.

use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::{abs_pow, c_p, k_p, psi, PhysicalParams};
use crate::spectral::Spectral;

/// The basic integrals every functional is assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Norms {
    /// ‖u‖².
    pub mass: f64,
    /// ‖D_x^α u‖².
    pub dalpha_sq: f64,
    /// ‖∂_x^{-1}u_y‖².
    pub dinv_y_sq: f64,
    /// ∫|u|^{p₁+1}/(p₁+1).
    pub k1: f64,
    /// ∫|u|^{p₂+1}/(p₂+1).
    pub k2: f64,
    /// ∫u ∂_x^{-1}u_y.
    pub momentum: f64,
    pub sup: f64,
}

impl Norms {
    pub fn xdot_sq(&self) -> f64 {
        self.dalpha_sq + self.dinv_y_sq
    }

    pub fn i_func(&self) -> f64 {
        0.5 * (self.mass + self.dalpha_sq + self.dinv_y_sq)
    }

    pub fn k_weighted(&self, p: &PhysicalParams) -> f64 {
        p.mu1 * self.k1 + p.mu2 * self.k2
    }

    pub fn n_func(&self, p: &PhysicalParams) -> f64 {
        p.mu1 * (p.p1 + 1.0) * self.k1 + p.mu2 * (p.p2 + 1.0) * self.k2
    }

    pub fn energy(&self, p: &PhysicalParams) -> f64 {
        0.5 * (self.dalpha_sq - p.eps * self.dinv_y_sq) - self.k_weighted(p)
    }

    pub fn nehari(&self, p: &PhysicalParams) -> f64 {
        2.0 * self.i_func() - self.n_func(p)
    }

    pub fn action(&self, p: &PhysicalParams) -> f64 {
        self.i_func() - self.k_weighted(p)
    }

    pub fn k_tilde(&self, p: &PhysicalParams) -> f64 {
        p.psi1() * p.mu1 * self.k1 + p.psi2() * p.mu2 * self.k2
    }

    pub fn s0(&self, p: &PhysicalParams) -> f64 {
        self.action(p) - self.nehari(p) / (s0_exponent(p) + 1.0)
    }

    pub fn r_bd(&self, p: &PhysicalParams, b: f64, d: f64) -> f64 {
        p.alpha * b * self.dalpha_sq + (d - b) * self.dinv_y_sq - (b + d) * self.k_tilde(p)
    }
}

/// `r` in `S₀ = S − P/(r+1)`: p₁ when μ₂ < 0, p₂ when μ₂ > 0, p₁ when μ₂ = 0.
pub fn s0_exponent(p: &PhysicalParams) -> f64 {
    if p.mu2 > 0.0 {
        p.p2
    } else {
        p.p1
    }
}

/// Computes [`Norms`] from the spectrum of a zero-x-mean field.
pub fn norms(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<Norms> {
    sp.check_zero_xmean(u)?;
    let spec = sp.transform(u)?;
    Ok(norms_from_spectrum(sp, &spec, u.values(), p))
}

pub(crate) fn norms_from_spectrum(sp: &Spectral, spec: &[C64], values: &[f64], p: &PhysicalParams) -> Norms {
    let g = sp.grid();
    let area = g.cell_area();
    let nyh = g.nyh();
    let sym = &sp.symbols;
    let dal: Vec<f64> = sym.xi.iter().map(|x| libm::pow(x.abs(), p.alpha)).collect();

    let mut buf = sp.zero_spectrum();
    let mut phys = alloc::vec![0.0; g.len()];

    for j in 0..g.nx {
        for k in 0..nyh {
            buf[j * nyh + k] = spec[j * nyh + k] * dal[j];
        }
    }
    sp.inverse_values(&buf, &mut phys);
    let dalpha_sq = phys.iter().map(|v| v * v).sum::<f64>() * area;

    // ∂_x^{-1}∂_y has the real symbol η/ξ.
    for j in 0..g.nx {
        let xi = sym.xi_odd[j];
        for k in 0..nyh {
            let m = if xi == 0.0 { 0.0 } else { sym.eta_odd[k] / xi };
            buf[j * nyh + k] = spec[j * nyh + k] * m;
        }
    }
    sp.inverse_values(&buf, &mut phys);
    let dinv_y_sq = phys.iter().map(|v| v * v).sum::<f64>() * area;
    let momentum = crate::field::dot(values, &phys) * area;

    let mut mass = 0.0;
    let mut k1 = 0.0;
    let mut k2 = 0.0;
    let mut sup: f64 = 0.0;
    let same = p.p2 == p.p1;
    for &v in values {
        mass += v * v;
        sup = sup.max(v.abs());
        k1 += abs_pow(v, p.p1 + 1.0);
        if !same {
            k2 += abs_pow(v, p.p2 + 1.0);
        }
    }
    if same {
        k2 = k1;
    }
    Norms {
        mass: mass * area,
        dalpha_sq,
        dinv_y_sq,
        k1: k1 * area / (p.p1 + 1.0),
        k2: k2 * area / (p.p2 + 1.0),
        momentum,
        sup,
    }
}

pub fn mass(u: &Field) -> f64 {
    u.dot(u)
}

pub fn momentum(sp: &Spectral, u: &Field) -> Result<f64> {
    Ok(norms(sp, u, &PhysicalParams::default())?.momentum)
}

pub fn energy(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<f64> {
    Ok(norms(sp, u, p)?.energy(p))
}

pub fn i_func(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<f64> {
    Ok(norms(sp, u, p)?.i_func())
}

/// `∫|u|^{p+1}/(p+1)`.
pub fn k_j(u: &Field, pj: f64) -> f64 {
    u.integrate(|v| abs_pow(v, pj + 1.0)) / (pj + 1.0)
}

pub fn n_func(u: &Field, p: &PhysicalParams) -> f64 {
    p.mu1 * (p.p1 + 1.0) * k_j(u, p.p1) + p.mu2 * (p.p2 + 1.0) * k_j(u, p.p2)
}

pub fn nehari(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<f64> {
    Ok(norms(sp, u, p)?.nehari(p))
}

pub fn action(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<f64> {
    Ok(norms(sp, u, p)?.action(p))
}

pub fn s0(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<f64> {
    Ok(norms(sp, u, p)?.s0(p))
}

pub fn k_tilde(u: &Field, p: &PhysicalParams) -> f64 {
    p.psi1() * p.mu1 * k_j(u, p.p1) + p.psi2() * p.mu2 * k_j(u, p.p2)
}

/// `R_{b,d}(u) = αb‖D^α u‖² + (d−b)‖∂_x^{-1}u_y‖² − (b+d)(ψ₁μ₁K₁ + ψ₂μ₂K₂)`.
pub fn r_bd(sp: &Spectral, u: &Field, p: &PhysicalParams, b: f64, d: f64) -> Result<f64> {
    Ok(norms(sp, u, p)?.r_bd(p, b, d))
}

/// Flat record of every functional at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticsRecord {
    pub mass: f64,
    pub energy: f64,
    pub momentum: f64,
    pub i_func: f64,
    pub k1: f64,
    pub k2: f64,
    pub n_func: f64,
    pub nehari: f64,
    pub action: f64,
    pub s0: f64,
    pub k_tilde: f64,
    pub xdot_norm_sq: f64,
    pub x_norm_sq: f64,
    pub sup_norm: f64,
}

impl DiagnosticsRecord {
    /// Column order used by every CSV writer.
    pub const COLUMNS: [&'static str; 14] = [
        "mass",
        "energy",
        "momentum",
        "iFunc",
        "k1",
        "k2",
        "nFunc",
        "nehari",
        "action",
        "s0",
        "kTilde",
        "xdotNormSq",
        "xNormSq",
        "supNorm",
    ];

    pub fn from_norms(n: &Norms, p: &PhysicalParams) -> Self {
        DiagnosticsRecord {
            mass: n.mass,
            energy: n.energy(p),
            momentum: n.momentum,
            i_func: n.i_func(),
            k1: n.k1,
            k2: n.k2,
            n_func: n.n_func(p),
            nehari: n.nehari(p),
            action: n.action(p),
            s0: n.s0(p),
            k_tilde: n.k_tilde(p),
            xdot_norm_sq: n.xdot_sq(),
            x_norm_sq: n.xdot_sq() + n.mass,
            sup_norm: n.sup,
        }
    }

    pub fn values(&self) -> [f64; 14] {
        [
            self.mass,
            self.energy,
            self.momentum,
            self.i_func,
            self.k1,
            self.k2,
            self.n_func,
            self.nehari,
            self.action,
            self.s0,
            self.k_tilde,
            self.xdot_norm_sq,
            self.x_norm_sq,
            self.sup_norm,
        ]
    }
}

pub fn diagnostics(sp: &Spectral, u: &Field, p: &PhysicalParams) -> Result<DiagnosticsRecord> {
    Ok(DiagnosticsRecord::from_norms(&norms(sp, u, p)?, p))
}

/// `‖u‖_{p+1}^{p+1} / (‖u‖^{2c_p} ‖D^α u‖^{(p−1)/α} ‖∂_x^{-1}u_y‖^{(p−1)/2})`.
pub fn sobolev_quotient(sp: &Spectral, u: &Field, p: f64, alpha: f64) -> Result<f64> {
    let params = PhysicalParams::single(alpha, p, 1.0);
    let n = norms(sp, u, &params)?;
    quotient_from_norms(&n, p, alpha)
}

pub fn quotient_from_norms(n: &Norms, p: f64, alpha: f64) -> Result<f64> {
    let floor = 1e-28;
    if n.mass < floor || n.dalpha_sq < floor || n.dinv_y_sq < floor {
        return Err(Error::DegenerateField);
    }
    let lp = (p + 1.0) * n.k1;
    let den = libm::pow(n.mass, c_p(alpha, p))
        * libm::pow(n.dalpha_sq, (p - 1.0) / (2.0 * alpha))
        * libm::pow(n.dinv_y_sq, (p - 1.0) / 4.0);
    Ok(lp / den)
}

/// Both closed forms of the sharp constant, evaluated from a ground state of
/// `D^{2α}φ + ∂_x^{-2}φ_yy + φ = |φ|^{p−1}φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SharpConstant {
    /// ρ_p from the mass form.
    pub rho_mass: f64,
    /// ρ_p from the action form.
    pub rho_action: f64,
    pub rel_diff: f64,
}

impl SharpConstant {
    /// The action form; the action is stationary at the ground state, so it
    /// is the less grid-sensitive of the two.
    pub fn rho(&self) -> f64 {
        self.rho_action
    }
}

pub fn sharp_constant_forms(phi_mass: f64, m: f64, p: f64, alpha: f64) -> SharpConstant {
    let kp = k_p(alpha, p);
    let cp = c_p(alpha, p);
    let pre = (p - 1.0) / (p + 1.0) / alpha;
    let inv_mass = pre
        * libm::pow(kp, cp - 0.5 * (p - 1.0))
        * libm::pow(0.5 * alpha, 0.25 * (p - 1.0))
        * libm::pow(phi_mass, 0.5 * (p - 1.0));
    let inv_action = pre * libm::pow(kp, cp) * libm::pow(2.0 / alpha, 0.25 * (p - 1.0)) * libm::pow(m, 0.5 * (p - 1.0));
    let rho_mass = 1.0 / inv_mass;
    let rho_action = 1.0 / inv_action;
    let rel_diff = (rho_mass - rho_action).abs() / rho_mass.abs().max(rho_action.abs());
    SharpConstant { rho_mass, rho_action, rel_diff }
}

/// Checked version: fails when the two forms disagree by more than 1e−3.
pub fn sharp_constant(phi_mass: f64, m: f64, p: f64, alpha: f64) -> Result<SharpConstant> {
    let s = sharp_constant_forms(phi_mass, m, p, alpha);
    if !(s.rel_diff <= 1e-3) {
        return Err(Error::InconsistentGroundState { rel_diff: s.rel_diff });
    }
    Ok(s)
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Relative residuals of the Pohozaev identities.
///
/// Single power (μ₂ = 0, or p₁ = p₂ with μ = μ₁+μ₂): three entries,
/// `2‖∂_x^{-1}φ_y‖² = α‖D^αφ‖²`, `α‖D^αφ‖² = ((p−1)/(p+1))·μ‖φ‖_{p+1}^{p+1}`,
/// `‖D^αφ‖² = ‖φ‖²/k_p`. Two powers: the four identities
/// `αD = 2Y`, `Y = Σψ_jμ_jK_j`, `ψ₁M = (r₁/2)D − (p₂−p₁)μ₂K₂`,
/// `ψ₂M = (r₂/2)D − (p₁−p₂)μ₁K₁` with `r_j = 4 + (p_j+3)(α−2)/2`.
pub fn pohozaev_from_norms(n: &Norms, p: &PhysicalParams) -> Vec<f64> {
    let a = p.alpha;
    let (m, d, y) = (n.mass, n.dalpha_sq, n.dinv_y_sq);
    if p.mu2 == 0.0 || p.p1 == p.p2 {
        let mu = if p.mu2 == 0.0 { p.mu1 } else { p.mu1 + p.mu2 };
        let pp = p.p1;
        let lp = (pp + 1.0) * n.k1 * mu;
        alloc::vec![rel(2.0 * y, a * d), rel(a * d, (pp - 1.0) / (pp + 1.0) * lp), rel(d, m / k_p(a, pp)),]
    } else {
        let r = |pj: f64| 4.0 + 0.5 * (pj + 3.0) * (a - 2.0);
        let (ps1, ps2) = (psi(p.p1), psi(p.p2));
        alloc::vec![
            rel(a * d, 2.0 * y),
            rel(y, ps1 * p.mu1 * n.k1 + ps2 * p.mu2 * n.k2),
            rel(ps1 * m, 0.5 * r(p.p1) * d - (p.p2 - p.p1) * p.mu2 * n.k2),
            rel(ps2 * m, 0.5 * r(p.p2) * d - (p.p1 - p.p2) * p.mu1 * n.k1),
        ]
    }
}

pub fn pohozaev_residuals(sp: &Spectral, phi: &Field, p: &PhysicalParams) -> Result<Vec<f64>> {
    Ok(pohozaev_from_norms(&norms(sp, phi, p)?, p))
}
