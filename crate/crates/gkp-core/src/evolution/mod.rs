//! Time integration of `u_t = D_x^{2α}u_x − f(u)_x − ε∂_x^{-1}u_yy`.

mod moments;
mod stepper;

pub use moments::{blowup_monitor, virial_series, x_moment_series, BlowupReport, MomentCheck};
pub use stepper::{default_dt, dispersion_symbol, step, Stepper};

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{norms_from_spectrum, DiagnosticsRecord};
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Integrating factor with classical RK4 on the transformed nonlinearity.
    IfRk4,
    /// Cox–Matthews ETD-RK4 with contour-evaluated coefficients.
    EtdRk4,
}

/// Weight φ(y) of the virial moment `𝒱 = ∫φ(y)u²`, with its second and
/// fourth derivatives.
#[derive(Debug, Clone, Copy)]
pub enum VirialWeight {
    YSquared,
    Custom { phi: fn(f64) -> f64, d2: fn(f64) -> f64, d4: fn(f64) -> f64 },
}

impl Default for VirialWeight {
    fn default() -> Self {
        VirialWeight::YSquared
    }
}

impl PartialEq for VirialWeight {
    fn eq(&self, other: &Self) -> bool {
        matches!((self, other), (VirialWeight::YSquared, VirialWeight::YSquared))
    }
}

impl VirialWeight {
    fn eval(&self, y: f64) -> (f64, f64, f64) {
        match self {
            VirialWeight::YSquared => (y * y, 2.0, 0.0),
            VirialWeight::Custom { phi, d2, d4 } => (phi(y), d2(y), d4(y)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TimeStepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub diagnostics_every: usize,
    /// Ẋ-norm cap; `None` means 1e6 times the initial Ẋ norm.
    pub blowup_norm_cap: Option<f64>,
    /// Share of spectral energy in the upper half of the retained band
    /// above which resolution is considered lost.
    pub band_guard: f64,
    #[serde(skip)]
    pub virial_weight: VirialWeight,
}

impl Default for TimeStepperConfig {
    fn default() -> Self {
        TimeStepperConfig {
            dt: 1e-3,
            t_end: 1.0,
            scheme: Scheme::IfRk4,
            dealias: true,
            diagnostics_every: 10,
            blowup_norm_cap: None,
            band_guard: 0.1,
            virial_weight: VirialWeight::YSquared,
        }
    }
}

impl TimeStepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams { field: "stepper.dt", reason: "must be positive" });
        }
        if !(self.t_end >= self.dt) {
            return Err(Error::InvalidParams { field: "stepper.tEnd", reason: "must be at least dt" });
        }
        if self.diagnostics_every == 0 {
            return Err(Error::InvalidParams { field: "stepper.diagnosticsEvery", reason: "must be at least 1" });
        }
        if let Some(c) = self.blowup_norm_cap {
            if !(c > 0.0) {
                return Err(Error::InvalidParams { field: "stepper.blowupNormCap", reason: "must be positive" });
            }
        }
        if !(self.band_guard > 0.0 && self.band_guard <= 1.0) {
            return Err(Error::InvalidParams { field: "stepper.bandGuard", reason: "must lie in (0, 1]" });
        }
        Ok(())
    }

    /// Number of steps: `t_end/dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        libm::round(self.t_end / self.dt).max(1.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Termination {
    Completed,
    BlowupDetected,
    NanDetected,
}

/// Everything sampled along one trajectory. All vectors have one entry per
/// sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryDiagnostics {
    pub params: PhysicalParams,
    pub dt: f64,
    pub times: Vec<f64>,
    pub records: Vec<DiagnosticsRecord>,
    /// `𝒱 = ∫φ(y)u²`.
    pub virial: Vec<f64>,
    /// `−∫φ⁗(∂_x^{-1}u)² + 4∫φ''((∂_x^{-1}u_y)² + εΣψ_jμ_jF_j)`, the predicted 𝒱''.
    pub virial_rhs: Vec<f64>,
    /// `∫x u²`.
    pub x_moment: Vec<f64>,
    /// `−(2α+1)‖D^αu‖² − ε‖∂_x^{-1}u_y‖² + 2∫(u f(u) − F(u))`, the predicted derivative.
    pub x_moment_rhs: Vec<f64>,
    pub band_fraction: Vec<f64>,
    /// `‖u_y‖`.
    pub uy_norm: Vec<f64>,
    /// `‖∂_x^{-1}u_y‖`.
    pub dinv_uy_norm: Vec<f64>,
    /// `(‖D^αu‖² + ‖∂_x^{-1}u_y‖²)^{1/2}`.
    pub xdot_norm: Vec<f64>,
    /// Realness defect of the inverse transforms, relative to the sup norm.
    pub realness_defect: Vec<f64>,
    /// Largest y-line x-mean relative to the sup norm.
    pub xmean_defect: Vec<f64>,
    /// Boundary/peak amplitude ratio (localization guard for the moments).
    pub boundary_ratio: Vec<f64>,
    pub terminated: Termination,
    pub blowup_norm_cap: f64,
    pub band_guard: f64,
    pub final_field: Field,
}

impl TrajectoryDiagnostics {
    fn relative_drift(&self, pick: impl Fn(&DiagnosticsRecord) -> f64) -> f64 {
        let first = match self.records.first() {
            Some(r) => pick(r),
            None => return 0.0,
        };
        let scale = if first.abs() > 0.0 { first.abs() } else { 1.0 };
        self.records.iter().map(|r| (pick(r) - first).abs() / scale).fold(0.0, f64::max)
    }

    /// Largest relative deviation of M from its initial value.
    pub fn mass_drift(&self) -> f64 {
        self.relative_drift(|r| r.mass)
    }

    pub fn energy_drift(&self) -> f64 {
        self.relative_drift(|r| r.energy)
    }

    /// Absolute momentum drift scaled by the initial mass.
    pub fn momentum_drift(&self) -> f64 {
        let (Some(a), Some(m)) = (self.records.first(), self.records.first().map(|r| r.mass)) else {
            return 0.0;
        };
        let scale = if m > 0.0 { m } else { 1.0 };
        self.records.iter().map(|r| (r.momentum - a.momentum).abs() / scale).fold(0.0, f64::max)
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}

/// Per-sample quantities derived from one spectrum.
struct Sampler<'a> {
    sp: &'a Spectral,
    params: PhysicalParams,
    weight: VirialWeight,
    spec: Vec<C64>,
    values: Vec<f64>,
    aux: Vec<f64>,
}

struct Sample {
    record: DiagnosticsRecord,
    virial: f64,
    virial_rhs: f64,
    x_moment: f64,
    x_moment_rhs: f64,
    band: f64,
    uy: f64,
    dinv_uy: f64,
    xdot: f64,
    defect: f64,
    xmean: f64,
    boundary: f64,
}

impl<'a> Sampler<'a> {
    fn new(sp: &'a Spectral, params: PhysicalParams, weight: VirialWeight) -> Self {
        let g = sp.grid();
        Sampler { sp, params, weight, spec: sp.zero_spectrum(), values: vec![0.0; g.len()], aux: vec![0.0; g.len()] }
    }

    /// Inverse transform of `uhat` times a real or imaginary multiplier.
    fn apply(&mut self, uhat: &[C64], m: impl Fn(usize, usize) -> C64) {
        let nyh = self.sp.grid().nyh();
        for (i, (o, z)) in self.spec.iter_mut().zip(uhat).enumerate() {
            *o = z * m(i / nyh, i % nyh);
        }
        self.sp.inverse_values(&self.spec, &mut self.aux);
    }

    fn sample(&mut self, uhat: &[C64]) -> Sample {
        let g = *self.sp.grid();
        let area = g.cell_area();
        let defect = self.sp.inverse_values(uhat, &mut self.values);
        let p = self.params;
        let n = norms_from_spectrum(self.sp, uhat, &self.values, &p);
        let record = DiagnosticsRecord::from_norms(&n, &p);
        let sup = n.sup.max(1e-300);

        let sym = &self.sp.symbols;
        let (xi, eta) = (sym.xi_odd.clone(), sym.eta_odd.clone());
        // ∂_x^{-1}u and u_y.
        self.apply(uhat, |j, _| crate::spectral::inv_i(xi[j]));
        let w = core::mem::take(&mut self.aux);
        self.aux = vec![0.0; g.len()];
        self.apply(uhat, |_, k| C64::new(0.0, eta[k]));
        let uy_sq = self.aux.iter().map(|v| v * v).sum::<f64>() * area;
        // (∂_x^{-1}u_y)² density: reuse the real multiplier η/ξ.
        self.apply(uhat, |j, k| if xi[j] == 0.0 { C64::new(0.0, 0.0) } else { C64::new(eta[k] / xi[j], 0.0) });
        let wy = &self.aux;

        let mut virial = 0.0;
        let mut vr4 = 0.0;
        let mut vr2 = 0.0;
        let mut xm = 0.0;
        let mut uf_minus_f = 0.0;
        let mut line_max: f64 = 0.0;
        let psi_f = |v: f64| {
            p.mu1 * p.psi1() * crate::params::abs_pow(v, p.p1 + 1.0) / (p.p1 + 1.0)
                + p.mu2 * p.psi2() * crate::params::abs_pow(v, p.p2 + 1.0) / (p.p2 + 1.0)
        };
        let mut line_sums = vec![0.0; g.ny];
        for ix in 0..g.nx {
            let x = g.x(ix);
            for iy in 0..g.ny {
                let i = ix * g.ny + iy;
                let v = self.values[i];
                let (ph, ph2, ph4) = self.weight.eval(g.y(iy));
                let u2 = v * v;
                virial += ph * u2;
                vr4 += ph4 * w[i] * w[i];
                vr2 += ph2 * (wy[i] * wy[i] + p.eps * psi_f(v));
                xm += x * u2;
                uf_minus_f += v * p.f(v) - p.big_f(v);
                line_sums[iy] += v;
            }
        }
        for s in &line_sums {
            line_max = line_max.max((s / g.nx as f64).abs());
        }
        let virial_rhs = (-vr4 + 4.0 * vr2) * area;
        let x_moment_rhs = -(2.0 * p.alpha + 1.0) * n.dalpha_sq - p.eps * n.dinv_y_sq + 2.0 * uf_minus_f * area;
        let boundary = {
            let f = Field::from_values(g, self.values.clone()).expect("grid length");
            f.boundary_sup() / sup
        };
        Sample {
            record,
            virial: virial * area,
            virial_rhs,
            x_moment: xm * area,
            x_moment_rhs,
            band: self.sp.band_fraction(uhat),
            uy: libm::sqrt(uy_sq),
            dinv_uy: libm::sqrt(n.dinv_y_sq),
            xdot: libm::sqrt(n.xdot_sq()),
            defect: defect / sup,
            xmean: line_max / sup,
            boundary,
        }
    }
}

/// Integrates to `t_end`, sampling every `diagnostics_every` steps (and at
/// the last step). Stops early on a non-finite state or when the Ẋ norm
/// passes the cap or the band fraction passes `band_guard`.
pub fn run(
    sp: &Spectral,
    u0: &Field,
    params: &PhysicalParams,
    cfg: &TimeStepperConfig,
) -> Result<TrajectoryDiagnostics> {
    run_observed(sp, u0, params, cfg, &mut |_, _| {})
}

/// [`run`] with a callback receiving `(t, u(t))` at every sample.
pub fn run_observed(
    sp: &Spectral,
    u0: &Field,
    params: &PhysicalParams,
    cfg: &TimeStepperConfig,
    observer: &mut dyn FnMut(f64, &Field),
) -> Result<TrajectoryDiagnostics> {
    cfg.validate()?;
    if !u0.is_finite() {
        return Err(Error::NanEncountered { time: 0.0 });
    }
    let mut stepper = Stepper::new(sp, params, cfg.dt, cfg.scheme, cfg.dealias)?;
    let mut uhat = stepper.initial_spectrum(u0)?;
    let mut sampler = Sampler::new(sp, *params, cfg.virial_weight);
    let mut traj = TrajectoryDiagnostics {
        params: *params,
        dt: cfg.dt,
        times: Vec::new(),
        records: Vec::new(),
        virial: Vec::new(),
        virial_rhs: Vec::new(),
        x_moment: Vec::new(),
        x_moment_rhs: Vec::new(),
        band_fraction: Vec::new(),
        uy_norm: Vec::new(),
        dinv_uy_norm: Vec::new(),
        xdot_norm: Vec::new(),
        realness_defect: Vec::new(),
        xmean_defect: Vec::new(),
        boundary_ratio: Vec::new(),
        terminated: Termination::Completed,
        blowup_norm_cap: 0.0,
        band_guard: cfg.band_guard,
        final_field: Field::zeros(*sp.grid()),
    };

    let record = |traj: &mut TrajectoryDiagnostics, s: Sample, t: f64| {
        traj.times.push(t);
        traj.records.push(s.record);
        traj.virial.push(s.virial);
        traj.virial_rhs.push(s.virial_rhs);
        traj.x_moment.push(s.x_moment);
        traj.x_moment_rhs.push(s.x_moment_rhs);
        traj.band_fraction.push(s.band);
        traj.uy_norm.push(s.uy);
        traj.dinv_uy_norm.push(s.dinv_uy);
        traj.xdot_norm.push(s.xdot);
        traj.realness_defect.push(s.defect);
        traj.xmean_defect.push(s.xmean);
        traj.boundary_ratio.push(s.boundary);
    };

    let s0 = sampler.sample(&uhat);
    let cap = cfg.blowup_norm_cap.unwrap_or(1e6 * s0.xdot.max(1e-300));
    traj.blowup_norm_cap = cap;
    record(&mut traj, s0, 0.0);
    observer(0.0, &sp.inverse_transform(&uhat)?);

    let steps = cfg.steps();
    for n in 1..=steps {
        stepper.step_spectrum(&mut uhat);
        let t = n as f64 * cfg.dt;
        let finite = uhat.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            traj.terminated = Termination::NanDetected;
            break;
        }
        if n % cfg.diagnostics_every == 0 || n == steps {
            let s = sampler.sample(&uhat);
            let flagged = s.xdot > cap || s.band > cfg.band_guard || !s.record.energy.is_finite();
            let nan = !s.record.energy.is_finite();
            record(&mut traj, s, t);
            observer(t, &sp.inverse_transform(&uhat)?);
            if nan {
                traj.terminated = Termination::NanDetected;
                break;
            }
            if flagged {
                traj.terminated = Termination::BlowupDetected;
                break;
            }
        }
    }
    if traj.terminated != Termination::NanDetected {
        traj.final_field = sp.inverse_transform(&uhat)?;
    }
    Ok(traj)
}

/// Integrates the linear or nonlinear flow forward by `t` and back with
/// `−dt`; returns the relative L² distance to `u0`.
pub fn time_reversal_error(
    sp: &Spectral,
    u0: &Field,
    params: &PhysicalParams,
    dt: f64,
    steps: usize,
    scheme: Scheme,
) -> Result<f64> {
    let mut fwd = Stepper::new(sp, params, dt, scheme, true)?;
    let mut bwd = Stepper::new(sp, params, -dt, scheme, true)?;
    let start = fwd.initial_spectrum(u0)?;
    let mut uhat = start.clone();
    for _ in 0..steps {
        fwd.step_spectrum(&mut uhat);
    }
    for _ in 0..steps {
        bwd.step_spectrum(&mut uhat);
    }
    let diff: Vec<C64> = uhat.iter().zip(&start).map(|(a, b)| a - b).collect();
    let e = sp.spectral_energy(&diff);
    let n = sp.spectral_energy(&start);
    Ok(if n > 0.0 { libm::sqrt(e / n) } else { libm::sqrt(e) })
}
