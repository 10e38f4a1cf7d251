use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use super::{Scheme, TimeStepperConfig};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

/// Nodes on the unit circle for the contour means of the ETD coefficients.
const CONTOUR_POINTS: usize = 32;

/// Dispersion relation `Ω = ξ|ξ|^{2α} − εη²/ξ` on the half plane; zero on
/// the ξ = 0 and Nyquist rows.
pub fn dispersion_symbol(sp: &Spectral, eps: f64) -> Vec<f64> {
    let g = sp.grid();
    let nyh = g.nyh();
    let sym = &sp.symbols;
    let mut om = vec![0.0; g.spectrum_len()];
    for j in 0..g.nx {
        let xi = sym.xi_odd[j];
        if xi == 0.0 {
            continue;
        }
        for k in 0..nyh {
            om[j * nyh + k] = xi * sym.xi_abs_2a[j] - eps * sym.eta_sq_over_xi[j * nyh + k];
        }
    }
    om
}

enum Coefficients {
    If { half: Vec<C64>, full: Vec<C64> },
    Etd { e: Vec<C64>, e2: Vec<C64>, q: Vec<C64>, f1: Vec<C64>, f2: Vec<C64>, f3: Vec<C64> },
}

/// Fixed-step exponential integrator for `û_t = iΩû − iξ Π f̂(u)`.
///
/// The state is the half-plane spectrum. Each nonlinear evaluation inverts,
/// applies f, transforms back, drops the ξ = 0 row (zero x-mean) and,
/// when dealiasing, everything outside the 2/3 band.
pub struct Stepper<'a> {
    sp: &'a Spectral,
    params: PhysicalParams,
    dt: f64,
    keep: Vec<bool>,
    coeffs: Coefficients,
    values: Vec<f64>,
    fvals: Vec<f64>,
    /// Largest realness defect seen by the last step.
    pub last_defect: f64,
}

impl<'a> Stepper<'a> {
    /// `dt` may be negative (backward integration).
    pub fn new(sp: &'a Spectral, params: &PhysicalParams, dt: f64, scheme: Scheme, dealias: bool) -> Result<Self> {
        params.validate()?;
        if !(dt != 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams { field: "stepper.dt", reason: "must be nonzero" });
        }
        let g = sp.grid();
        let nyh = g.nyh();
        let mut keep = vec![false; g.spectrum_len()];
        for j in 0..g.nx {
            if sp.symbols.xi[j] == 0.0 {
                continue;
            }
            for k in 0..nyh {
                let i = j * nyh + k;
                keep[i] = !dealias || sp.symbols.dealias_mask[i];
            }
        }
        let om = dispersion_symbol(sp, params.eps);
        let coeffs = match scheme {
            Scheme::IfRk4 => Coefficients::If {
                half: om.iter().map(|w| C64::new(0.0, w * dt * 0.5).exp()).collect(),
                full: om.iter().map(|w| C64::new(0.0, w * dt).exp()).collect(),
            },
            Scheme::EtdRk4 => etd_coefficients(&om, dt),
        };
        Ok(Stepper {
            sp,
            params: *params,
            dt,
            keep,
            coeffs,
            values: vec![0.0; g.len()],
            fvals: vec![0.0; g.len()],
            last_defect: 0.0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Removes the modes the scheme does not evolve.
    pub fn restrict(&self, spec: &mut [C64]) {
        for (z, &k) in spec.iter_mut().zip(&self.keep) {
            if !k {
                *z = C64::new(0.0, 0.0);
            }
        }
    }

    /// `−iξ Π f̂(u)` into `out`.
    fn nonlinear(&mut self, uhat: &[C64], out: &mut [C64]) {
        if self.params.is_linear() {
            out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            return;
        }
        let d = self.sp.inverse_values(uhat, &mut self.values);
        self.last_defect = self.last_defect.max(d);
        let p = self.params;
        for (o, &v) in self.fvals.iter_mut().zip(&self.values) {
            *o = p.f(v);
        }
        self.sp.forward_values(&self.fvals, out);
        let nyh = self.sp.grid().nyh();
        let xi = &self.sp.symbols.xi_odd;
        for (i, z) in out.iter_mut().enumerate() {
            *z = if self.keep[i] { C64::new(0.0, -xi[i / nyh]) * *z } else { C64::new(0.0, 0.0) };
        }
    }

    /// Advances `uhat` by one step in place.
    pub fn step_spectrum(&mut self, uhat: &mut [C64]) {
        self.last_defect = 0.0;
        let n = uhat.len();
        let dt = self.dt;
        let mut k1 = vec![C64::new(0.0, 0.0); n];
        let mut k2 = vec![C64::new(0.0, 0.0); n];
        let mut k3 = vec![C64::new(0.0, 0.0); n];
        let mut k4 = vec![C64::new(0.0, 0.0); n];
        let mut tmp = vec![C64::new(0.0, 0.0); n];
        // Borrow juggling: the coefficient tables are moved out for the
        // duration of the step.
        let coeffs = core::mem::replace(&mut self.coeffs, Coefficients::If { half: Vec::new(), full: Vec::new() });
        match &coeffs {
            Coefficients::If { half, full } => {
                self.nonlinear(uhat, &mut k1);
                for i in 0..n {
                    tmp[i] = half[i] * (uhat[i] + k1[i] * (0.5 * dt));
                }
                self.nonlinear(&tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = half[i] * uhat[i] + k2[i] * (0.5 * dt);
                }
                self.nonlinear(&tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = full[i] * uhat[i] + half[i] * k3[i] * dt;
                }
                self.nonlinear(&tmp, &mut k4);
                for i in 0..n {
                    uhat[i] =
                        full[i] * uhat[i] + (full[i] * k1[i] + half[i] * (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
            }
            Coefficients::Etd { e, e2, q, f1, f2, f3 } => {
                let (nu, na, nb, nc) = (&mut k1, &mut k2, &mut k3, &mut k4);
                self.nonlinear(uhat, nu);
                let mut a = vec![C64::new(0.0, 0.0); n];
                for i in 0..n {
                    a[i] = e2[i] * uhat[i] + q[i] * nu[i];
                }
                self.nonlinear(&a, na);
                for i in 0..n {
                    tmp[i] = e2[i] * uhat[i] + q[i] * na[i];
                }
                self.nonlinear(&tmp, nb);
                for i in 0..n {
                    tmp[i] = e2[i] * a[i] + q[i] * (nb[i] * 2.0 - nu[i]);
                }
                self.nonlinear(&tmp, nc);
                for i in 0..n {
                    uhat[i] = e[i] * uhat[i] + f1[i] * nu[i] + f2[i] * (na[i] + nb[i]) * 2.0 + f3[i] * nc[i];
                }
            }
        }
        self.coeffs = coeffs;
    }

    /// Spectrum of a zero-x-mean field, restricted to the evolved modes.
    pub fn initial_spectrum(&self, u: &Field) -> Result<Vec<C64>> {
        self.sp.check_zero_xmean(u)?;
        let mut s = self.sp.transform(u)?;
        self.restrict(&mut s);
        Ok(s)
    }
}

/// ETD-RK4 coefficients with the φ-functions evaluated as means over a
/// circle of radius 1 around `z = iΩ·dt`, which avoids the cancellation
/// near `z = 0`.
fn etd_coefficients(om: &[f64], dt: f64) -> Coefficients {
    let n = om.len();
    let roots: Vec<C64> = (0..CONTOUR_POINTS)
        .map(|m| {
            let th = 2.0 * core::f64::consts::PI * (m as f64 + 0.5) / CONTOUR_POINTS as f64;
            C64::new(libm::cos(th), libm::sin(th))
        })
        .collect();
    let mut e = Vec::with_capacity(n);
    let mut e2 = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    let mut f1 = Vec::with_capacity(n);
    let mut f2 = Vec::with_capacity(n);
    let mut f3 = Vec::with_capacity(n);
    let inv = 1.0 / CONTOUR_POINTS as f64;
    for &w in om {
        let l = C64::new(0.0, w * dt);
        e.push(l.exp());
        e2.push((l * 0.5).exp());
        let (mut sq, mut s1, mut s2, mut s3) =
            (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for r in &roots {
            let z = l + r;
            let ez = z.exp();
            let z3 = z * z * z;
            sq += ((z * 0.5).exp() - 1.0) / z;
            s1 += (-4.0 - z + ez * (4.0 - z * 3.0 + z * z)) / z3;
            s2 += (2.0 + z + ez * (z - 2.0)) / z3;
            s3 += (-4.0 - z * 3.0 - z * z + ez * (4.0 - z)) / z3;
        }
        q.push(sq * (dt * inv));
        f1.push(s1 * (dt * inv));
        f2.push(s2 * (dt * inv));
        f3.push(s3 * (dt * inv));
    }
    Coefficients::Etd { e, e2, q, f1, f2, f3 }
}

/// One step of the configured scheme.
pub fn step(sp: &Spectral, u: &Field, params: &PhysicalParams, cfg: &TimeStepperConfig) -> Result<Field> {
    cfg.validate()?;
    let mut st = Stepper::new(sp, params, cfg.dt, cfg.scheme, cfg.dealias)?;
    let mut uhat = st.initial_spectrum(u)?;
    st.step_spectrum(&mut uhat);
    let out = sp.inverse_transform(&uhat)?;
    if !out.is_finite() {
        return Err(Error::NanEncountered { time: cfg.dt });
    }
    Ok(out)
}

/// Phase-accuracy step `0.4 / max|Ω|` over the evolved modes, capped at
/// `1e−3·Lx`.
pub fn default_dt(sp: &Spectral, params: &PhysicalParams, dealias: bool) -> f64 {
    let om = dispersion_symbol(sp, params.eps);
    let mask = &sp.symbols.dealias_mask;
    let wmax = om.iter().zip(mask).filter(|(_, &m)| m || !dealias).fold(0.0f64, |a, (w, _)| a.max(w.abs()));
    let cap = 1e-3 * sp.grid().lx;
    if wmax > 0.0 {
        (0.4 / wmax).min(cap)
    } else {
        cap
    }
}
