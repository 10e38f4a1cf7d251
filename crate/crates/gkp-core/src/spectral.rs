//! Fourier-multiplier operators on the periodic grid.
//!
//! Normalization: `transform` is the unnormalized DFT, the inverse carries
//! `1/(nx·ny)`. Parseval therefore reads
//! `Σ f² · hx·hy = hx·hy/(nx·ny) · Σ_full |F|²`, where the full-plane sum
//! counts interior half-plane columns twice (see [`Spectral::spectral_energy`]).
//!
//! Odd symbols (`iξ`, `iη`, `1/(iξ)`, the dispersion relation) vanish on the
//! Nyquist rows, which are their own conjugate partners; this is what keeps
//! real fields real under every operator.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fft::RealFft2;
use crate::field::Field;
use crate::grid::GridSpec;

/// Precomputed symbols on the half-plane spectrum.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    pub alpha: f64,
    /// ξ_j in FFT order (length nx).
    pub xi: Vec<f64>,
    /// η_k for `k = 0..=ny/2`.
    pub eta: Vec<f64>,
    /// ξ with the Nyquist row zeroed, for odd symbols.
    pub xi_odd: Vec<f64>,
    /// η with the Nyquist column zeroed, for odd symbols.
    pub eta_odd: Vec<f64>,
    /// |ξ|^{2α} (length nx).
    pub xi_abs_2a: Vec<f64>,
    /// η²/ξ on the half plane, 0 on the ξ = 0 row.
    pub eta_sq_over_xi: Vec<f64>,
    pub dealias_mask: Vec<bool>,
    /// Modes with |j| ≤ `cut_x` and |k| ≤ `cut_y` survive dealiasing.
    pub cut_x: f64,
    pub cut_y: f64,
}

impl SymbolTable {
    /// `keep` is the retained fraction of each half band; 2/3 gives the
    /// usual `|j| ≤ nx/3` rule.
    pub fn new(grid: &GridSpec, alpha: f64, keep: f64) -> Self {
        let (nx, nyh) = (grid.nx, grid.nyh());
        let xi: Vec<f64> = (0..nx).map(|j| grid.xi(j)).collect();
        let eta: Vec<f64> = (0..nyh).map(|k| grid.eta(k)).collect();
        let mut xi_odd = xi.clone();
        xi_odd[nx / 2] = 0.0;
        let mut eta_odd = eta.clone();
        eta_odd[nyh - 1] = 0.0;
        let xi_abs_2a = xi.iter().map(|x| libm::pow(x.abs(), 2.0 * alpha)).collect();
        let mut eta_sq_over_xi = vec![0.0; nx * nyh];
        let mut dealias_mask = vec![false; nx * nyh];
        let cut_x = keep * nx as f64 / 2.0;
        let cut_y = keep * grid.ny as f64 / 2.0;
        for j in 0..nx {
            let a = grid.mode_x(j).abs() as f64;
            for k in 0..nyh {
                let i = j * nyh + k;
                if xi_odd[j] != 0.0 {
                    eta_sq_over_xi[i] = eta[k] * eta[k] / xi_odd[j];
                }
                dealias_mask[i] = a <= cut_x && (k as f64) <= cut_y;
            }
        }
        SymbolTable { alpha, xi, eta, xi_odd, eta_odd, xi_abs_2a, eta_sq_over_xi, dealias_mask, cut_x, cut_y }
    }
}

/// Transform plans plus symbols for one grid; read-only after construction.
#[derive(Debug, Clone)]
pub struct Spectral {
    grid: GridSpec,
    fft: RealFft2,
    pub symbols: SymbolTable,
    /// Relative tolerance on y-line x-means accepted by `∂_x^{-1}`.
    pub xmean_tol: f64,
}

impl Spectral {
    pub fn new(grid: GridSpec, alpha: f64) -> Result<Self> {
        Self::with_dealias(grid, alpha, 2.0 / 3.0)
    }

    pub fn with_dealias(grid: GridSpec, alpha: f64, keep: f64) -> Result<Self> {
        grid.validate()?;
        if !(alpha > 0.0) {
            return Err(Error::InvalidParams { field: "params.alpha", reason: "must be positive" });
        }
        if !(keep > 0.0 && keep <= 1.0) {
            return Err(Error::InvalidParams { field: "stepper.dealiasKeep", reason: "must lie in (0, 1]" });
        }
        Ok(Spectral {
            grid,
            fft: RealFft2::new(grid.nx, grid.ny),
            symbols: SymbolTable::new(&grid, alpha, keep),
            xmean_tol: 1e-10,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn check(&self, f: &Field) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::DimensionMismatch { expected: self.grid.len(), found: f.grid().len() });
        }
        Ok(())
    }

    pub fn zero_spectrum(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.grid.spectrum_len()]
    }

    pub fn transform(&self, f: &Field) -> Result<Vec<C64>> {
        self.check(f)?;
        if let Some(s) = f.cached_spectrum() {
            return Ok(s.to_vec());
        }
        let mut spec = self.zero_spectrum();
        self.fft.forward(f.values(), &mut spec);
        Ok(spec)
    }

    pub fn forward_values(&self, values: &[f64], spec: &mut [C64]) {
        self.fft.forward(values, spec);
    }

    /// Inverse into a raw buffer; returns the realness defect.
    pub fn inverse_values(&self, spec: &[C64], values: &mut [f64]) -> f64 {
        self.fft.inverse(spec, values)
    }

    pub fn inverse_transform(&self, spec: &[C64]) -> Result<Field> {
        if spec.len() != self.grid.spectrum_len() {
            return Err(Error::DimensionMismatch { expected: self.grid.spectrum_len(), found: spec.len() });
        }
        let mut values = vec![0.0; self.grid.len()];
        self.fft.inverse(spec, &mut values);
        Ok(Field::with_spectrum(self.grid, values, spec.to_vec()))
    }

    /// Applies a multiplier `m(j, k)` to every half-plane mode.
    pub fn multiply(&self, spec: &mut [C64], m: impl Fn(usize, usize) -> C64) {
        let nyh = self.grid.nyh();
        for j in 0..self.grid.nx {
            for k in 0..nyh {
                spec[j * nyh + k] *= m(j, k);
            }
        }
    }

    fn apply(&self, f: &Field, m: impl Fn(usize, usize) -> C64) -> Result<Field> {
        let mut spec = self.transform(f)?;
        self.multiply(&mut spec, m);
        self.inverse_transform(&spec)
    }

    /// Multiplies every mode by |ξ|^s.
    pub fn dx_frac(&self, f: &Field, s: f64) -> Result<Field> {
        let w: Vec<f64> = self.symbols.xi.iter().map(|x| libm::pow(x.abs(), s)).collect();
        self.apply(f, |j, _| C64::new(w[j], 0.0))
    }

    pub fn dx(&self, f: &Field) -> Result<Field> {
        let xi = &self.symbols.xi_odd;
        self.apply(f, |j, _| C64::new(0.0, xi[j]))
    }

    pub fn dy(&self, f: &Field) -> Result<Field> {
        let eta = &self.symbols.eta_odd;
        self.apply(f, |_, k| C64::new(0.0, eta[k]))
    }

    /// `∂_x^{-1}`: symbol `1/(iξ)`, zero on the ξ = 0 row.
    pub fn antideriv_x(&self, f: &Field) -> Result<Field> {
        self.check_zero_xmean(f)?;
        let xi = &self.symbols.xi_odd;
        self.apply(f, |j, _| inv_i(xi[j]))
    }

    pub fn dealias(&self, f: &Field) -> Result<Field> {
        let mask = &self.symbols.dealias_mask;
        let nyh = self.grid.nyh();
        self.apply(f, |j, k| if mask[j * nyh + k] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn dealias_spectrum(&self, spec: &mut [C64]) {
        for (z, &keep) in spec.iter_mut().zip(&self.symbols.dealias_mask) {
            if !keep {
                *z = C64::new(0.0, 0.0);
            }
        }
    }

    /// Zeroes the ξ = 0 row (the y-profile of x-means).
    pub fn project_spectrum(&self, spec: &mut [C64]) {
        let nyh = self.grid.nyh();
        spec[..nyh].iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
    }

    pub fn project_zero_xmean(&self, f: &Field) -> Result<Field> {
        let mut spec = self.transform(f)?;
        self.project_spectrum(&mut spec);
        self.inverse_transform(&spec)
    }

    /// Largest |x-mean| over y-lines.
    pub fn max_line_mean(&self, f: &Field) -> f64 {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let v = f.values();
        let mut worst: f64 = 0.0;
        for iy in 0..ny {
            let s: f64 = (0..nx).map(|ix| v[ix * ny + iy]).sum();
            worst = worst.max((s / nx as f64).abs());
        }
        worst
    }

    /// Rejects fields whose x-means exceed `xmean_tol` times their RMS value.
    pub fn check_zero_xmean(&self, f: &Field) -> Result<()> {
        self.check(f)?;
        let rms = libm::sqrt(f.values().iter().map(|v| v * v).sum::<f64>() / self.grid.len() as f64);
        let tolerance = self.xmean_tol * rms;
        let m = self.max_line_mean(f);
        if m > tolerance && m > 0.0 {
            return Err(Error::NonZeroXMean { max_line_mean: m, tolerance });
        }
        Ok(())
    }

    /// Full-plane `Σ |F|²` from the stored half plane.
    pub fn spectral_energy(&self, spec: &[C64]) -> f64 {
        let nyh = self.grid.nyh();
        let mut s = 0.0;
        for j in 0..self.grid.nx {
            for k in 0..nyh {
                let w = if k == 0 || k == nyh - 1 { 1.0 } else { 2.0 };
                s += w * spec[j * nyh + k].norm_sqr();
            }
        }
        s
    }

    /// `∫ f²` evaluated on the spectral side.
    pub fn parseval_l2_sq(&self, spec: &[C64]) -> f64 {
        self.spectral_energy(spec) * self.grid.cell_area() / self.grid.len() as f64
    }

    /// Share of spectral energy in modes with |j| > cut_x/2 or |k| > cut_y/2,
    /// i.e. in the upper half of the retained band.
    pub fn band_fraction(&self, spec: &[C64]) -> f64 {
        let nyh = self.grid.nyh();
        let (hx, hy) = (0.5 * self.symbols.cut_x, 0.5 * self.symbols.cut_y);
        let (mut outer, mut total) = (0.0, 0.0);
        for j in 0..self.grid.nx {
            let a = self.grid.mode_x(j).abs() as f64;
            for k in 0..nyh {
                let w = if k == 0 || k == nyh - 1 { 1.0 } else { 2.0 };
                let e = w * spec[j * nyh + k].norm_sqr();
                total += e;
                if a > hx || k as f64 > hy {
                    outer += e;
                }
            }
        }
        if total > 0.0 {
            outer / total
        } else {
            0.0
        }
    }
}

/// `1/(iξ)`, zero at ξ = 0.
pub(crate) fn inv_i(xi: f64) -> C64 {
    if xi == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        C64::new(0.0, -1.0 / xi)
    }
}
