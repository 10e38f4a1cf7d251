use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of
/// `(u_t − D_x^{2α}u_x + f(u)_x)_x + ε u_yy = 0`,
/// `f(u) = μ₁|u|^{p₁−1}u + μ₂|u|^{p₂−1}u`.
///
/// With these signs solitary waves of speed c > 0 exist for ε = −1; the
/// energy `½(‖D^α u‖² − ε‖∂_x^{-1}u_y‖²) − K` is then coercive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhysicalParams {
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub eps: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams { alpha: 1.0, p1: 2.0, p2: 2.0, mu1: 1.0, mu2: 0.0, eps: -1.0 }
    }
}

impl PhysicalParams {
    /// Single power `μ|u|^{p−1}u` in the lump regime ε = −1.
    pub fn single(alpha: f64, p: f64, mu: f64) -> Self {
        PhysicalParams { alpha, p1: p, p2: p, mu1: mu, mu2: 0.0, eps: -1.0 }
    }

    pub fn linear(alpha: f64, eps: f64) -> Self {
        PhysicalParams { alpha, p1: 2.0, p2: 2.0, mu1: 0.0, mu2: 0.0, eps }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParams { field: "params.alpha", reason: "must be positive" });
        }
        if !(self.p1 > 1.0 && self.p1.is_finite()) {
            return Err(Error::InvalidParams { field: "params.p1", reason: "must exceed 1" });
        }
        if !(self.p2 >= 1.0 && self.p2.is_finite()) {
            return Err(Error::InvalidParams { field: "params.p2", reason: "must be at least 1" });
        }
        if !self.mu1.is_finite() || !self.mu2.is_finite() {
            return Err(Error::InvalidParams { field: "params.mu", reason: "must be finite" });
        }
        if self.eps != 1.0 && self.eps != -1.0 {
            return Err(Error::InvalidParams { field: "params.eps", reason: "must be +1 or -1" });
        }
        Ok(())
    }

    /// Critical exponent `1 + 4α/(2+α)`.
    pub fn s_c(&self) -> f64 {
        1.0 + 4.0 * self.alpha / (2.0 + self.alpha)
    }

    pub fn c_p(&self, p: f64) -> f64 {
        c_p(self.alpha, p)
    }

    pub fn k_p(&self, p: f64) -> f64 {
        k_p(self.alpha, p)
    }

    pub fn psi1(&self) -> f64 {
        psi(self.p1)
    }

    pub fn psi2(&self) -> f64 {
        psi(self.p2)
    }

    /// `f(u)`.
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        let mut s = 0.0;
        if self.mu1 != 0.0 {
            s += self.mu1 * signed_pow(u, self.p1);
        }
        if self.mu2 != 0.0 {
            s += self.mu2 * signed_pow(u, self.p2);
        }
        s
    }

    /// `F(u) = μ₁F₁ + μ₂F₂`, `F_j = |u|^{p_j+1}/(p_j+1)`.
    #[inline]
    pub fn big_f(&self, u: f64) -> f64 {
        self.mu1 * abs_pow(u, self.p1 + 1.0) / (self.p1 + 1.0) + self.mu2 * abs_pow(u, self.p2 + 1.0) / (self.p2 + 1.0)
    }

    pub fn is_linear(&self) -> bool {
        self.mu1 == 0.0 && self.mu2 == 0.0
    }
}

pub fn c_p(alpha: f64, p: f64) -> f64 {
    (3.0 * alpha + 2.0 + p * (alpha - 2.0)) / (4.0 * alpha)
}

pub fn k_p(alpha: f64, p: f64) -> f64 {
    (3.0 * alpha + 2.0 + p * (alpha - 2.0)) / (2.0 * (p - 1.0))
}

pub fn psi(p: f64) -> f64 {
    0.5 * (p - 1.0)
}

/// `|u|^q`, with multiplication for small integer q.
#[inline]
pub fn abs_pow(u: f64, q: f64) -> f64 {
    let a = u.abs();
    match q as i32 {
        2 if q == 2.0 => a * a,
        3 if q == 3.0 => a * a * a,
        4 if q == 4.0 => (a * a) * (a * a),
        5 if q == 5.0 => (a * a) * (a * a) * a,
        6 if q == 6.0 => (a * a) * (a * a) * (a * a),
        _ => libm::pow(a, q),
    }
}

/// `|u|^{p−1}u`.
#[inline]
pub fn signed_pow(u: f64, p: f64) -> f64 {
    match p as i32 {
        2 if p == 2.0 => u.abs() * u,
        3 if p == 3.0 => u * u * u,
        4 if p == 4.0 => u.abs() * u * u * u,
        5 if p == 5.0 => (u * u) * (u * u) * u,
        _ => libm::pow(u.abs(), p - 1.0) * u,
    }
}
