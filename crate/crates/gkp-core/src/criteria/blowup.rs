use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{Check, Verdict};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::norms;
use crate::params::PhysicalParams;
use crate::spectral::Spectral;

/// Minimal `C` with `a^{p₁} ≤ τa² + C a^{p₂}` for all `a > 0`.
///
/// `C = sup_a (a^{p₁} − τa²)/a^{p₂}`, attained at
/// `a* = (τ(p₂−2)/(p₂−p₁))^{1/(p₁−2)}`.
pub fn young_constant(tau: f64, p1: f64, p2: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParams { field: "tau", reason: "must be positive" });
    }
    if !(p1 > 2.0) {
        return Err(Error::InvalidParams { field: "p1", reason: "no finite constant unless p1 > 2" });
    }
    if !(p2 > p1) {
        return Err(Error::InvalidParams { field: "p2", reason: "no finite constant unless p2 > p1" });
    }
    let a = libm::pow(tau * (p2 - 2.0) / (p2 - p1), 1.0 / (p1 - 2.0));
    Ok(libm::pow(a, p1 - p2) - tau * libm::pow(a, 2.0 - p2))
}

/// Grid maximum of `(a^{p₁} − τa²)/a^{p₂}` over `n` log-spaced points
/// in `[lo, hi]`, refined by golden-section search around the best point.
pub fn young_constant_grid(tau: f64, p1: f64, p2: f64, lo: f64, hi: f64, n: usize) -> f64 {
    let g = |t: f64| {
        let a = libm::exp(t);
        libm::pow(a, p1 - p2) - tau * libm::pow(a, 2.0 - p2)
    };
    let (tl, th) = (libm::log(lo), libm::log(hi));
    let step = (th - tl) / (n - 1) as f64;
    let mut best = (tl, g(tl));
    for i in 1..n {
        let t = tl + step * i as f64;
        let v = g(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    g(0.5 * (a + b)).max(best.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BlowupCase {
    I,
    Ii,
    Iii,
}

/// Which exponent pair the Young step of case (iii) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum YoungExponents {
    /// `(p₁+1, p₂+1)`, the pair the integrated inequality needs.
    #[default]
    Shifted,
    /// `(p₁, p₂)`.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlowupConditions {
    pub case_label: BlowupCase,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub c_tau: Option<f64>,
    pub a_p1: Option<f64>,
    pub a_p2: Option<f64>,
    pub energy: f64,
    pub mass: f64,
    pub conditions_met: Vec<Check>,
    pub verdict: Verdict,
}

fn case_iii_values(params: &PhysicalParams, theta: f64, tau: f64, young: YoungExponents) -> (f64, f64, Option<f64>) {
    let (p1, p2) = (params.p1, params.p2);
    let a_p1 = params.mu1 * (theta * (p2 - 1.0) - p1 + 1.0) / (2.0 * (p1 + 1.0));
    let a_p2 = params.mu2 * params.psi2() * (1.0 - theta) / (p2 + 1.0);
    let c = match young {
        YoungExponents::Shifted => young_constant(tau, p1 + 1.0, p2 + 1.0),
        YoungExponents::Literal => young_constant(tau, p1, p2),
    };
    (a_p1, a_p2, c.ok())
}

/// Evaluates every hypothesis of one blow-up case for `u0`.
///
/// `theta` and `tau` only matter for case (iii); when either is missing the
/// pair is taken from [`search_theta_tau`] (or left unset when the search
/// finds nothing, in which case the verdict is `hypothesesNotMet`).
pub fn blowup_conditions(
    sp: &Spectral,
    u0: &Field,
    params: &PhysicalParams,
    case: BlowupCase,
    theta: Option<f64>,
    tau: Option<f64>,
    young: YoungExponents,
) -> Result<BlowupConditions> {
    params.validate()?;
    let n = norms(sp, u0, params)?;
    let energy = n.energy(params);
    let mass = n.mass;
    let (p1, p2) = (params.p1, params.p2);
    let mut checks = Vec::new();
    checks.push(Check::new("epsMinusOne", params.eps == -1.0));
    // On a periodic box y²u₀ is always integrable; this stands in for the
    // weighted-space hypothesis.
    checks.push(Check::new("weightedDataBoxProxy", true));
    let mut out = BlowupConditions {
        case_label: case,
        theta: None,
        tau: None,
        c_tau: None,
        a_p1: None,
        a_p2: None,
        energy,
        mass,
        conditions_met: Vec::new(),
        verdict: Verdict::HypothesesNotMet,
    };
    match case {
        BlowupCase::I => {
            checks.push(Check::with_value("mu2Positive", params.mu2 > 0.0, params.mu2));
            checks.push(Check::with_value("energyNonpositive", energy <= 0.0, -energy));
            checks.push(Check::new("exponentOrder", p2 >= p1 && p1 >= 5.0));
        }
        BlowupCase::Ii => {
            checks.push(Check::with_value("mu1Negative", params.mu1 < 0.0, -params.mu1));
            checks.push(Check::with_value("energyNonpositive", energy <= 0.0, -energy));
            checks.push(Check::new("exponentOrder", p2 >= p1.max(5.0)));
        }
        BlowupCase::Iii => {
            checks.push(Check::new("signPattern", params.mu2 < 0.0 && 0.0 < params.mu1));
            let pair = match (theta, tau) {
                (Some(t), Some(s)) => Some((t, s)),
                _ => search_theta_tau(params, energy, mass, young, 50),
            };
            match pair {
                Some((th, ta)) => {
                    let (a_p1, a_p2, c) = case_iii_values(params, th, ta, young);
                    checks.push(Check::new("thetaInRange", th > 0.0 && th < 1.0));
                    checks.push(Check::new("tauPositive", ta > 0.0));
                    checks.push(Check::new("exponentOrder", p2 >= (4.0 / th + 1.0).max(p1)));
                    let e_lhs = 0.5 * (p2 - 1.0) * th * energy + a_p1 * ta * mass;
                    checks.push(Check::with_value("energyInequality", e_lhs <= 0.0, -e_lhs));
                    match c {
                        Some(c) => {
                            let y_lhs = a_p1 * c + a_p2;
                            checks.push(Check::with_value("youngInequality", y_lhs <= 0.0, -y_lhs));
                        }
                        None => checks.push(Check::new("youngInequality", false)),
                    }
                    out.theta = Some(th);
                    out.tau = Some(ta);
                    out.c_tau = c;
                    out.a_p1 = Some(a_p1);
                    out.a_p2 = Some(a_p2);
                }
                None => checks.push(Check::new("admissibleThetaTau", false)),
            }
        }
    }
    out.verdict = if checks.iter().all(|c| c.holds) { Verdict::BlowupGuaranteed } else { Verdict::HypothesesNotMet };
    out.conditions_met = checks;
    Ok(out)
}

/// First `(θ, τ)` on an `n × n` log grid (θ ∈ [0.01, 0.99] outer,
/// τ ∈ [1e−4, 1e4] inner) satisfying every case (iii) inequality.
pub fn search_theta_tau(
    params: &PhysicalParams,
    energy: f64,
    mass: f64,
    young: YoungExponents,
    n: usize,
) -> Option<(f64, f64)> {
    let n = n.max(2);
    let log_grid = |lo: f64, hi: f64, i: usize| {
        libm::exp(libm::log(lo) + (libm::log(hi) - libm::log(lo)) * i as f64 / (n - 1) as f64)
    };
    for i in 0..n {
        let th = log_grid(0.01, 0.99, i);
        if params.p2 < (4.0 / th + 1.0).max(params.p1) {
            continue;
        }
        for j in 0..n {
            let ta = log_grid(1e-4, 1e4, j);
            let (a_p1, a_p2, c) = case_iii_values(params, th, ta, young);
            let Some(c) = c else { continue };
            if 0.5 * (params.p2 - 1.0) * th * energy + a_p1 * ta * mass <= 0.0 && a_p1 * c + a_p2 <= 0.0 {
                return Some((th, ta));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentBounds {
    pub b: f64,
    pub d: f64,
    /// `4 max{d−b, αb}/(b+d) + 1`.
    pub lemma_bound: f64,
    pub lemma_holds: bool,
    /// `4 max{(d−b)/(b+d), αb/(d+b−1)} + 1`, defined when `d+b > 1`.
    pub improved_bound: Option<f64>,
    pub improved_holds: bool,
    /// `1 + 4αb/((α+2)b − 1)`, defined when `b > 1/(α+2)`.
    pub instability_bound: Option<f64>,
    pub instability_b_ok: bool,
    pub instability_d_ok: bool,
    pub instability_holds: bool,
}

/// Evaluates the three exponent bounds of the R_{b,d} theory for `p₁`.
pub fn exponent_bounds_check(params: &PhysicalParams, b: f64, d: f64) -> ExponentBounds {
    let a = params.alpha;
    let p1 = params.p1;
    let lemma_bound = if b + d > 0.0 { 4.0 * (d - b).max(a * b) / (b + d) + 1.0 } else { f64::INFINITY };
    let improved_bound =
        if d + b > 1.0 { Some(4.0 * ((d - b) / (b + d)).max(a * b / (d + b - 1.0)) + 1.0) } else { None };
    let instability_b_ok = b > 1.0 / (a + 2.0);
    let instability_bound = if instability_b_ok { Some(1.0 + 4.0 * a * b / ((a + 2.0) * b - 1.0)) } else { None };
    let instability_d_ok = (d - (1.0 + a) * b).abs() <= 1e-12 * d.abs().max(1.0);
    ExponentBounds {
        b,
        d,
        lemma_bound,
        lemma_holds: p1 >= lemma_bound,
        improved_bound,
        improved_holds: improved_bound.is_some_and(|v| p1 > v),
        instability_bound,
        instability_b_ok,
        instability_d_ok,
        instability_holds: instability_b_ok && instability_d_ok && instability_bound.is_some_and(|v| p1 > v),
    }
}
