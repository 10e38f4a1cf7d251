use alloc::vec::Vec;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Real samples on a periodic grid, `values[ix * ny + iy]`.
///
/// `spectral` caches the half-plane transform produced by
/// [`crate::spectral::Spectral`]; every mutating accessor drops it.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<f64>,
    spectral: Option<Vec<C64>>,
}

impl Field {
    pub fn zeros(grid: GridSpec) -> Self {
        Field { grid, values: alloc::vec![0.0; grid.len()], spectral: None }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Field { grid, values, spectral: None })
    }

    /// Samples `f(x, y)` at the box-centered grid points.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx {
            let x = grid.x(ix);
            for iy in 0..grid.ny {
                values.push(f(x, grid.y(iy)));
            }
        }
        Field { grid, values, spectral: None }
    }

    pub(crate) fn with_spectrum(grid: GridSpec, values: Vec<f64>, spec: Vec<C64>) -> Self {
        Field { grid, values, spectral: Some(spec) }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        self.spectral = None;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn cached_spectrum(&self) -> Option<&[C64]> {
        self.spectral.as_deref()
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.grid.ny + iy]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value of largest magnitude (keeps its sign).
    pub fn extremum(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, &v| if v.abs() > m.abs() { v } else { m })
    }

    /// Largest magnitude on the outer ring of grid points.
    pub fn boundary_sup(&self) -> f64 {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut m: f64 = 0.0;
        for ix in 0..nx {
            m = m.max(self.at(ix, 0).abs()).max(self.at(ix, ny - 1).abs());
        }
        for iy in 0..ny {
            m = m.max(self.at(0, iy).abs()).max(self.at(nx - 1, iy).abs());
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
            spectral: self.spectral.as_ref().map(|sp| sp.iter().map(|z| z * s).collect()),
        }
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch { expected: self.grid.len(), found: other.grid.len() });
        }
        Ok(())
    }

    /// Rectangle-rule integral of `g(u)` over the box.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.values.iter().map(|&v| g(v)).sum::<f64>() * self.grid.cell_area()
    }

    /// Rectangle-rule L² inner product.
    pub fn dot(&self, other: &Field) -> f64 {
        dot(&self.values, &other.values) * self.grid.cell_area()
    }

    /// Rectangle-rule L² norm.
    pub fn l2(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
