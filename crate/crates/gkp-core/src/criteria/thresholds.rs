//! Boundedness thresholds built on `h(z) = ½z² − Σ_j a_j z^{e_j}`.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{Check, Verdict};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::norms;
use crate::params::{c_p, PhysicalParams};
use crate::spectral::Spectral;

/// Sharp Sobolev constants for the two powers, usually read off computed
/// ground states with [`crate::functionals::sharp_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SharpConstants {
    pub rho1: f64,
    pub rho2: f64,
    /// `‖φ_{s_c}‖²` for the explicit critical mass bound, when known.
    pub critical_mass: Option<f64>,
}

/// `e_j = (α+2)(p_j−1)/(2α)`.
pub fn h_exponent(alpha: f64, p: f64) -> f64 {
    (alpha + 2.0) * (p - 1.0) / (2.0 * alpha)
}

/// Coefficients `a_j = μ_jρ_j M^{c_{p_j}}/(p_j+1)` and exponents `e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HParams {
    pub a1: f64,
    pub e1: f64,
    pub a2: f64,
    pub e2: f64,
}

impl HParams {
    pub fn new(params: &PhysicalParams, mass_u0: f64, rho1: f64, rho2: f64) -> Self {
        let a = params.alpha;
        let coef = |mu: f64, rho: f64, p: f64| {
            if mu == 0.0 {
                0.0
            } else {
                mu * rho * libm::pow(mass_u0, c_p(a, p)) / (p + 1.0)
            }
        };
        HParams {
            a1: coef(params.mu1, rho1, params.p1),
            e1: h_exponent(a, params.p1),
            a2: coef(params.mu2, rho2, params.p2),
            e2: h_exponent(a, params.p2),
        }
    }

    pub fn h(&self, z: f64) -> f64 {
        0.5 * z * z - self.a1 * libm::pow(z, self.e1) - self.a2 * libm::pow(z, self.e2)
    }

    pub fn h_prime(&self, z: f64) -> f64 {
        z - self.a1 * self.e1 * libm::pow(z, self.e1 - 1.0) - self.a2 * self.e2 * libm::pow(z, self.e2 - 1.0)
    }

    /// `h̃(z) = h'(z)/z`.
    pub fn h_tilde(&self, z: f64) -> f64 {
        1.0 - self.a1 * self.e1 * libm::pow(z, self.e1 - 2.0) - self.a2 * self.e2 * libm::pow(z, self.e2 - 2.0)
    }
}

/// `h(z)`; `z` must be nonnegative.
pub fn h_eval(z: f64, params: &PhysicalParams, mass_u0: f64, rho1: f64, rho2: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::InvalidParams { field: "z", reason: "must be nonnegative" });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(HParams::new(params, mass_u0, rho1, rho2).h(z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Regime {
    /// Both powers below s_c.
    Subcritical,
    /// Largest power equal to s_c.
    Critical,
    /// Smaller power equal to s_c, larger above it.
    SupercriticalI,
    /// Both powers above s_c.
    SupercriticalII,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RadiusKind {
    Z0,
    Z1,
}

/// Critical radius of h and the associated level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalRadius {
    pub kind: RadiusKind,
    /// Root of h' found by bisection; this is the value used downstream.
    pub z_numeric: f64,
    /// `(A/B)^{(s_c−1)/(2p₂−s_c+1)}` in the z₀ case.
    pub z_closed_form: Option<f64>,
    pub rel_discrepancy: Option<f64>,
    /// Closed form and numerical root differ by more than 1e−6.
    pub ambiguity: bool,
    pub h_prime_at_root: f64,
    /// `h` at the numerical root.
    pub h_max: f64,
    /// `A z₀² (e₂−2)/(2e₂)` (z₀ case) or `(½ − 1/e₁) z₁²` (z₁ case), at the
    /// numerical root.
    pub h_level_formula: f64,
    /// h̃ checked strictly decreasing on a grid before bisection.
    pub monotone: bool,
    pub a: f64,
    pub b: f64,
}

/// Bisection for the positive zero of h̃ (equivalently of h').
fn bisect_root(hp: &HParams) -> Result<(f64, bool)> {
    if !(hp.h_tilde(1e-12) > 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    // Bracket by doubling.
    let mut hi = 1.0;
    let mut n = 0;
    while hp.h_tilde(hi) > 0.0 {
        hi *= 2.0;
        n += 1;
        if n > 2000 || !hi.is_finite() {
            return Err(Error::NoPositiveRoot);
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    if lo == 0.0 {
        lo = 1.0;
        while hp.h_tilde(lo) <= 0.0 {
            lo *= 0.5;
            if lo < 1e-200 {
                return Err(Error::NoPositiveRoot);
            }
        }
    }
    let monotone = {
        let mut ok = true;
        let mut prev = hp.h_tilde(lo * 1e-3);
        for i in 1..=400 {
            let z = lo * 1e-3 + (hi * 2.0 - lo * 1e-3) * i as f64 / 400.0;
            let v = hp.h_tilde(z);
            if !(v < prev) {
                ok = false;
            }
            prev = v;
        }
        ok
    };
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hp.h_tilde(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick the end point with the smaller |h'|.
    let z = if hp.h_prime(lo).abs() <= hp.h_prime(hi).abs() { lo } else { hi };
    Ok((z, monotone))
}

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// z₀ (smaller power equal to s_c) or z₁ (both powers above s_c).
///
/// Always returns the numerical root of h'; in the z₀ case it also evaluates
/// the printed closed form and raises `ambiguity` when they differ.
pub fn z0_and_z1(params: &PhysicalParams, mass_u0: f64, rho1: f64, rho2: f64) -> Result<CriticalRadius> {
    let hp = HParams::new(params, mass_u0, rho1, rho2);
    let sc = params.s_c();
    let (lo_p, hi_p) = (params.p1.min(params.p2), params.p1.max(params.p2));
    let kind = if approx_eq(lo_p, sc) { RadiusKind::Z0 } else { RadiusKind::Z1 };
    let (z, monotone) = bisect_root(&hp)?;
    let h_max = hp.h(z);
    // Sort the terms so index 1 is the smaller power.
    let (al, el, ah, eh) =
        if params.p1 <= params.p2 { (hp.a1, hp.e1, hp.a2, hp.e2) } else { (hp.a2, hp.e2, hp.a1, hp.e1) };
    let (a, b) = (1.0 - 2.0 * al, ah * eh);
    let mut out = CriticalRadius {
        kind,
        z_numeric: z,
        z_closed_form: None,
        rel_discrepancy: None,
        ambiguity: false,
        h_prime_at_root: hp.h_prime(z),
        h_max,
        h_level_formula: (0.5 - 1.0 / el) * z * z,
        monotone,
        a: 1.0,
        b: 0.0,
    };
    if kind == RadiusKind::Z0 {
        if !(b > 0.0) {
            return Err(Error::NoPositiveRoot);
        }
        let zc = libm::pow(a / b, (sc - 1.0) / (2.0 * hi_p - sc + 1.0));
        let rel = (zc - z).abs() / z.abs().max(zc.abs());
        out.z_closed_form = Some(zc);
        out.rel_discrepancy = Some(rel);
        out.ambiguity = rel > 1e-6;
        out.h_level_formula = a * z * z * (eh - 2.0) / (2.0 * eh);
        out.a = a;
        out.b = b;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdReport {
    pub regime: Regime,
    pub h_params: HParams,
    pub z0: Option<f64>,
    pub z1: Option<f64>,
    pub h_max: Option<f64>,
    pub radius: Option<CriticalRadius>,
    /// E(u₀).
    pub e0: f64,
    /// ‖u₀‖_Ẋ.
    pub xdot0: f64,
    pub mass0: f64,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

/// Evaluates which boundedness theorem applies to `u0` and whether its
/// hypotheses hold.
///
/// The two powers enter h symmetrically, so they are sorted before the
/// regime is read; `p₁ = p₂` is treated as one power with `μ = μ₁ + μ₂`.
/// Coefficients must be nonnegative and ε = −1 (coercive energy).
pub fn classify_energy_subcritical(
    sp: &Spectral,
    u0: &Field,
    params: &PhysicalParams,
    oracle: &SharpConstants,
) -> Result<ThresholdReport> {
    params.validate()?;
    let n = norms(sp, u0, params)?;
    let e0 = n.energy(params);
    let xdot0 = libm::sqrt(n.xdot_sq());
    let mass0 = n.mass;
    let mut p = *params;
    let mut rho = (oracle.rho1, oracle.rho2);
    if p.p1 == p.p2 {
        p.mu1 += p.mu2;
        p.mu2 = 0.0;
    }
    if p.mu2 == 0.0 {
        p.p2 = p.p1;
        rho.1 = rho.0;
    }
    let hp = HParams::new(&p, mass0, rho.0, rho.1);
    let sc = p.s_c();
    let mut checks = Vec::new();
    checks.push(Check::new("epsMinusOne", params.eps == -1.0));
    checks.push(Check::new("muNonnegative", params.mu1 >= 0.0 && params.mu2 >= 0.0));
    checks.push(Check::new("muPositive", params.mu1 + params.mu2 > 0.0));
    let base_ok = checks.iter().all(|c| c.holds);

    let (lo_p, hi_p) = if p.mu2 == 0.0 { (p.p1, p.p1) } else { (p.p1.min(p.p2), p.p1.max(p.p2)) };
    let regime = if hi_p < sc && !approx_eq(hi_p, sc) {
        Regime::Subcritical
    } else if approx_eq(hi_p, sc) {
        Regime::Critical
    } else if approx_eq(lo_p, sc) {
        Regime::SupercriticalI
    } else if lo_p > sc {
        Regime::SupercriticalII
    } else {
        Regime::Unclassified
    };

    let mut report = ThresholdReport {
        regime,
        h_params: hp,
        z0: None,
        z1: None,
        h_max: None,
        radius: None,
        e0,
        xdot0,
        mass0,
        checks,
        verdict: Verdict::Indeterminate,
    };
    if !base_ok {
        report.verdict = Verdict::HypothesesNotMet;
        return Ok(report);
    }
    match regime {
        Regime::Subcritical => {
            report.checks.push(Check::new("powersBelowCritical", true));
            report.verdict = Verdict::BoundedGuaranteed;
        }
        Regime::Critical => {
            // 1 − 2μρ M^{c}/(p+1) > 0 for the critical term.
            let a_crit = if approx_eq(p.p1, sc) { hp.a1 } else { hp.a2 };
            let lhs = 1.0 - 2.0 * a_crit;
            report.checks.push(Check::with_value("criticalityInequality", lhs > 0.0, lhs));
            if let Some(qm) = oracle.critical_mass {
                let a = p.alpha;
                let mu = if approx_eq(p.p1, sc) { p.mu1 } else { p.mu2 };
                let bound = (1.0 / mu)
                    * (2.0 / (2.0 + 3.0 * a))
                    * libm::pow(a / 2.0, a / (a + 2.0))
                    * libm::pow(qm, 2.0 * a / (a + 2.0));
                let lhs = libm::pow(mass0, c_p(a, sc));
                report.checks.push(Check::with_value("explicitMassBound", lhs < bound, bound - lhs));
            }
            report.verdict = if lhs > 0.0 { Verdict::BoundedGuaranteed } else { Verdict::HypothesesNotMet };
        }
        Regime::SupercriticalI | Regime::SupercriticalII => {
            let r = z0_and_z1(&p, mass0, rho.0, rho.1);
            match r {
                Ok(r) => {
                    let z = r.z_numeric;
                    let size_ok = xdot0 < z;
                    let (energy_ok, level) = if regime == Regime::SupercriticalI {
                        (e0 < r.h_max, r.h_max)
                    } else {
                        (e0 < r.h_level_formula, r.h_level_formula)
                    };
                    if regime == Regime::SupercriticalI {
                        report.z0 = Some(z);
                        report.checks.push(Check::with_value("criticalityInequality", r.a > 0.0, r.a));
                    } else {
                        report.z1 = Some(z);
                    }
                    report.h_max = Some(r.h_max);
                    report.checks.push(Check::with_value("xdotBelowRadius", size_ok, z - xdot0));
                    report.checks.push(Check::with_value("energyBelowLevel", energy_ok, level - e0));
                    if r.ambiguity {
                        report.checks.push(Check::with_value(
                            "closedFormAgreesWithRoot",
                            false,
                            r.rel_discrepancy.unwrap_or(0.0),
                        ));
                    }
                    let all = size_ok && energy_ok && (regime != Regime::SupercriticalI || r.a > 0.0);
                    report.verdict = if all { Verdict::BoundedGuaranteed } else { Verdict::HypothesesNotMet };
                    report.radius = Some(r);
                }
                Err(Error::NoPositiveRoot) => {
                    report.checks.push(Check::new("positiveRootOfHPrime", false));
                    report.verdict = Verdict::HypothesesNotMet;
                }
                Err(e) => return Err(e),
            }
        }
        Regime::Unclassified => {
            report.verdict = Verdict::Indeterminate;
        }
    }
    Ok(report)
}
