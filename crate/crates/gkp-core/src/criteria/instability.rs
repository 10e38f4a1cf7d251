use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{norms, Norms};
use crate::ground_state::{speed_c_ground_state, GroundStateResult, PetviashviliConfig};
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Membership {
    InLambdaPlus,
    InLambdaMinus,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LambdaReport {
    pub membership: Membership,
    pub action: f64,
    pub r_bd: f64,
    pub m_estimate: f64,
}

/// `S(u) < m` is read with a relative margin of 1e−9 so that the ground
/// state itself lands on the boundary.
fn below_level(s: f64, m: f64) -> bool {
    s < m - 1e-9 * m.abs()
}

/// Λ⁺ = {S < m, R_{b,d} ≥ 0}, Λ⁻ = {S < m, R_{b,d} < 0}.
pub fn lambda_membership(
    sp: &Spectral,
    u: &Field,
    params: &PhysicalParams,
    b: f64,
    d: f64,
    m_estimate: f64,
) -> Result<LambdaReport> {
    let n = norms(sp, u, params)?;
    Ok(membership_from_norms(&n, params, b, d, m_estimate))
}

fn membership_from_norms(n: &Norms, params: &PhysicalParams, b: f64, d: f64, m: f64) -> LambdaReport {
    let action = n.action(params);
    let r_bd = n.r_bd(params, b, d);
    let membership = if !below_level(action, m) {
        Membership::Neither
    } else if r_bd >= 0.0 {
        Membership::InLambdaPlus
    } else {
        Membership::InLambdaMinus
    };
    LambdaReport { membership, action, r_bd, m_estimate: m }
}

/// Trigonometric interpolant of one periodic line, evaluated at
/// `x_i·scale` for every grid point `x_i = −L/2 + i h`.
fn dilate_line(line: &[f64], scale: f64, out: &mut [f64]) {
    let n = line.len();
    let tw = 2.0 * core::f64::consts::PI / n as f64;
    // Coefficients for signed modes −n/2..n/2 (Nyquist kept as a cosine).
    let mut coef = vec![C64::new(0.0, 0.0); n];
    for (m, c) in coef.iter_mut().enumerate() {
        let mut s = C64::new(0.0, 0.0);
        for (i, &v) in line.iter().enumerate() {
            let th = -tw * ((m * i) % n) as f64;
            s += C64::new(libm::cos(th), libm::sin(th)) * v;
        }
        *c = s / n as f64;
    }
    let half = n / 2;
    for (i, o) in out.iter_mut().enumerate() {
        // Position in units of the grid step, measured from the left edge.
        let s = (i as f64 - half as f64) * scale + half as f64;
        let mut acc = 0.0;
        for (m, c) in coef.iter().enumerate() {
            let k = if m <= half { m as f64 } else { m as f64 - n as f64 };
            let th = tw * k * s;
            let val = c.re * libm::cos(th) - c.im * libm::sin(th);
            if n % 2 == 0 && m == half {
                acc += c.re * libm::cos(th);
            } else {
                acc += val;
            }
        }
        *o = acc;
    }
}

/// `(x, y) ↦ φ(B x, D y)` on the same grid, by separable trigonometric
/// interpolation (periodic wrap outside the box).
pub fn dilate(phi: &Field, bx: f64, dy: f64) -> Field {
    let g = *phi.grid();
    let (nx, ny) = (g.nx, g.ny);
    let mut tmp = vec![0.0; g.len()];
    let mut col = vec![0.0; nx];
    let mut res = vec![0.0; nx];
    for iy in 0..ny {
        for ix in 0..nx {
            col[ix] = phi.at(ix, iy);
        }
        dilate_line(&col, bx, &mut res);
        for ix in 0..nx {
            tmp[ix * ny + iy] = res[ix];
        }
    }
    let mut out = vec![0.0; g.len()];
    let mut row = vec![0.0; ny];
    for ix in 0..nx {
        dilate_line(&tmp[ix * ny..(ix + 1) * ny], dy, &mut row);
        out[ix * ny..(ix + 1) * ny].copy_from_slice(&row);
    }
    Field::from_values(g, out).expect("grid length")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstabilityTrial {
    pub b: f64,
    pub d: f64,
    pub r_bd: f64,
    pub r_bdm1: f64,
    pub action_w: f64,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstabilitySetup {
    pub b: f64,
    pub d: f64,
    pub big_b: f64,
    pub big_d: f64,
    pub w: Field,
    pub r_bd: f64,
    pub r_bdm1: f64,
    pub action_w: f64,
    pub m_estimate: f64,
    pub admissible: bool,
    /// `‖w − φ‖_X`, `‖·‖²_X = M + ‖D^α·‖² + ‖∂_x^{-1}∂_y·‖²`.
    pub delta_distance: f64,
    pub band_fraction: f64,
    /// Every b tried, in order.
    pub trace: Vec<InstabilityTrial>,
}

/// Builds `w = √(BD) φ(Bx, Dy)` with `B = D = √(BD)` and tries
/// `b, 2b, 4b, …, 2¹⁰ b` with `d = (1+α)b` until
/// `R_{b,d}(w) < 0`, `S(w) < m` and `R_{b,d−1}(w) > 0`.
///
/// Returns the setup for the last b tried whether or not it is admissible.
pub fn instability_scan(
    sp: &Spectral,
    phi: &GroundStateResult,
    params: &PhysicalParams,
    b: f64,
    bd: f64,
    band_guard: f64,
) -> Result<InstabilitySetup> {
    params.validate()?;
    if !(bd > 1.0 && bd <= 1.2) {
        return Err(Error::InvalidParams { field: "instability.bd", reason: "must lie in (1, 1.2]" });
    }
    if !(b > 1.0 / (params.alpha + 2.0)) {
        return Err(Error::InvalidParams { field: "instability.b", reason: "must exceed 1/(alpha+2)" });
    }
    let s = libm::sqrt(bd);
    let raw = dilate(&phi.profile, s, s).scaled(s);
    let w = sp.project_zero_xmean(&raw)?;
    let spec = sp.transform(&w)?;
    let band_fraction = sp.band_fraction(&spec);
    if band_fraction > band_guard {
        return Err(Error::ResamplingError { band_fraction });
    }
    let nw = norms(sp, &w, params)?;
    let diff =
        Field::from_values(*w.grid(), w.values().iter().zip(phi.profile.values()).map(|(a, c)| a - c).collect())?;
    let nd = norms(sp, &diff, params)?;
    let delta_distance = libm::sqrt(nd.mass + nd.dalpha_sq + nd.dinv_y_sq);
    let m = phi.action_value;
    let action_w = nw.action(params);

    let mut trace = Vec::new();
    let mut bb = b;
    for i in 0..=10 {
        if i > 0 {
            bb *= 2.0;
        }
        let d = (1.0 + params.alpha) * bb;
        let r_bd = nw.r_bd(params, bb, d);
        let r_bdm1 = nw.r_bd(params, bb, d - 1.0);
        let admissible = r_bd < 0.0 && below_level(action_w, m) && r_bdm1 > 0.0;
        trace.push(InstabilityTrial { b: bb, d, r_bd, r_bdm1, action_w, admissible });
        if admissible {
            break;
        }
    }
    let last = *trace.last().expect("at least one trial");
    Ok(InstabilitySetup {
        b: last.b,
        d: last.d,
        big_b: s,
        big_d: s,
        w,
        r_bd: last.r_bd,
        r_bdm1: last.r_bdm1,
        action_w,
        m_estimate: m,
        admissible: last.admissible,
        delta_distance,
        band_fraction,
        trace,
    })
}

/// [`instability_scan`], failing with `NotAdmissible` when no b works.
pub fn instability_data(
    sp: &Spectral,
    phi: &GroundStateResult,
    params: &PhysicalParams,
    b: f64,
    bd: f64,
    band_guard: f64,
) -> Result<InstabilitySetup> {
    let s = instability_scan(sp, phi, params, b, bd, band_guard)?;
    if s.admissible {
        Ok(s)
    } else {
        Err(Error::NotAdmissible { last_b: s.b })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DProbe {
    pub h: f64,
    /// Speeds `1−h, 1−h/2, 1, 1+h/2, 1+h`.
    pub speeds: Vec<f64>,
    /// `d(c) = E(φ_c) + c M(φ_c)` at each speed.
    pub d_values: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Centered second difference with step h.
    pub d2: f64,
    /// Same with step h/2.
    pub d2_half: f64,
    /// `|d2 − d2_half| / |d2_half|`.
    pub richardson_change: f64,
}

/// Centered second difference of `d(c) = E(φ_c) + c M(φ_c)` at c = 1.
pub fn d_second_derivative(sp: &Spectral, params: &PhysicalParams, h: f64, cfg: &PetviashviliConfig) -> Result<DProbe> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::InvalidParams { field: "probe.h", reason: "must lie in (0, 0.5)" });
    }
    let speeds = vec![1.0 - h, 1.0 - 0.5 * h, 1.0, 1.0 + 0.5 * h, 1.0 + h];
    let centre = speed_c_ground_state(sp, 1.0, params, None, cfg)?;
    let mut d_values = vec![0.0; 5];
    let mut residuals = vec![0.0; 5];
    for (i, &c) in speeds.iter().enumerate() {
        let r = if i == 2 { centre.clone() } else { speed_c_ground_state(sp, c, params, Some(&centre.profile), cfg)? };
        d_values[i] = r.norms.energy(params) + c * r.norms.mass;
        residuals[i] = r.residual_norm;
    }
    let d2 = (d_values[4] - 2.0 * d_values[2] + d_values[0]) / (h * h);
    let d2_half = (d_values[3] - 2.0 * d_values[2] + d_values[1]) / (0.25 * h * h);
    let richardson_change = (d2 - d2_half).abs() / d2_half.abs().max(f64::MIN_POSITIVE);
    Ok(DProbe { h, speeds, d_values, residuals, d2, d2_half, richardson_change })
}
