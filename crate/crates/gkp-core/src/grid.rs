use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic rectangular grid on the box-centered cell `[-Lx/2, Lx/2) × [-Ly/2, Ly/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        let g = GridSpec { nx, ny, lx, ly };
        g.validate()?;
        Ok(g)
    }

    pub fn square(n: usize, l: f64) -> Result<Self> {
        Self::new(n, n, l, l)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.nx % 2 != 0 {
            return Err(Error::InvalidParams { field: "grid.nx", reason: "must be even and >= 8" });
        }
        if self.ny < 8 || self.ny % 2 != 0 {
            return Err(Error::InvalidParams { field: "grid.ny", reason: "must be even and >= 8" });
        }
        if !(self.lx > 0.0 && self.lx.is_finite()) {
            return Err(Error::InvalidParams { field: "grid.lx", reason: "must be positive" });
        }
        if !(self.ly > 0.0 && self.ly.is_finite()) {
            return Err(Error::InvalidParams { field: "grid.ly", reason: "must be positive" });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of stored half-plane spectral columns along y.
    pub fn nyh(&self) -> usize {
        self.ny / 2 + 1
    }

    pub fn spectrum_len(&self) -> usize {
        self.nx * self.nyh()
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    /// Box-centered x coordinate of column `i`.
    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.lx + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -0.5 * self.ly + j as f64 * self.hy()
    }

    /// Signed mode number of FFT index `j` along x (`-nx/2..nx/2-1`).
    pub fn mode_x(&self, j: usize) -> i64 {
        signed_mode(j, self.nx)
    }

    /// Mode number of half-plane column `k` along y (`0..=ny/2`; `ny/2` is
    /// the Nyquist mode).
    pub fn mode_y(&self, k: usize) -> i64 {
        k as i64
    }

    pub fn xi(&self, j: usize) -> f64 {
        2.0 * core::f64::consts::PI * self.mode_x(j) as f64 / self.lx
    }

    pub fn eta(&self, k: usize) -> f64 {
        2.0 * core::f64::consts::PI * k as f64 / self.ly
    }

    /// Physical index for mode numbers `(a, b)`, `a` along x.
    pub fn spectral_index(&self, a: i64, b: i64) -> Option<usize> {
        if b < 0 || b as usize >= self.nyh() {
            return None;
        }
        let nx = self.nx as i64;
        if a < -nx / 2 || a >= nx / 2 {
            return None;
        }
        let j = if a < 0 { a + nx } else { a } as usize;
        Some(j * self.nyh() + b as usize)
    }
}

pub(crate) fn signed_mode(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}
