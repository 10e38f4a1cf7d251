use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{Termination, TrajectoryDiagnostics};
use crate::error::{Error, Result};

/// Finite-difference derivative of a moment next to its predicted value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentCheck {
    /// Interior sample times.
    pub times: Vec<f64>,
    pub measured: Vec<f64>,
    pub predicted: Vec<f64>,
    /// `|measured − predicted| / max|predicted|` over the whole series.
    pub rel_error: Vec<f64>,
    pub max_rel_error: f64,
}

fn check(times: Vec<f64>, measured: Vec<f64>, predicted: Vec<f64>) -> MomentCheck {
    let scale = predicted.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let rel_error: Vec<f64> = measured.iter().zip(&predicted).map(|(m, p)| (m - p).abs() / scale).collect();
    let max_rel_error = rel_error.iter().copied().fold(0.0, f64::max);
    MomentCheck { times, measured, predicted, rel_error, max_rel_error }
}

/// Centered second difference of `𝒱(t)` against the predicted `𝒱''`.
///
/// Three-point formula for possibly unequal spacing.
pub fn virial_series(traj: &TrajectoryDiagnostics) -> Result<MomentCheck> {
    let n = traj.times.len();
    if n < 3 {
        return Err(Error::InsufficientSampling { needed: 3, found: n });
    }
    let (t, v) = (&traj.times, &traj.virial);
    let mut times = Vec::with_capacity(n - 2);
    let mut measured = Vec::with_capacity(n - 2);
    let mut predicted = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        let d2 = 2.0 * ((v[i + 1] - v[i]) / h2 - (v[i] - v[i - 1]) / h1) / (h1 + h2);
        times.push(t[i]);
        measured.push(d2);
        predicted.push(traj.virial_rhs[i]);
    }
    Ok(check(times, measured, predicted))
}

/// Centered first difference of `∫x u²` against the predicted derivative.
pub fn x_moment_series(traj: &TrajectoryDiagnostics) -> Result<MomentCheck> {
    let n = traj.times.len();
    if n < 3 {
        return Err(Error::InsufficientSampling { needed: 3, found: n });
    }
    let (t, m) = (&traj.times, &traj.x_moment);
    let mut times = Vec::with_capacity(n - 2);
    let mut measured = Vec::with_capacity(n - 2);
    let mut predicted = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let (h1, h2) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        // Second-order accurate on unequal spacing.
        let d = (h1 * h1 * (m[i + 1] - m[i]) + h2 * h2 * (m[i] - m[i - 1])) / (h1 * h2 * (h1 + h2));
        times.push(t[i]);
        measured.push(d);
        predicted.push(traj.x_moment_rhs[i]);
    }
    Ok(check(times, measured, predicted))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlowupReport {
    pub flagged: bool,
    /// `"normCap"`, `"bandGuard"`, `"nan"` or `None`.
    pub reason: Option<&'static str>,
    pub flag_time: Option<f64>,
    /// Growth factors of `‖u_y‖`, `‖∂_x^{-1}u_y‖` and the Ẋ norm, taken at
    /// the last sample before the band guard tripped (or the last sample).
    pub uy_growth: f64,
    pub dinv_uy_growth: f64,
    pub xdot_growth: f64,
    /// The norm with the largest growth factor.
    pub dominant: &'static str,
    pub max_band_fraction: f64,
    /// Time of the first sample over the band guard.
    pub band_guard_time: Option<f64>,
}

/// Reads the blow-up indicators off a trajectory.
pub fn blowup_monitor(traj: &TrajectoryDiagnostics) -> BlowupReport {
    let n = traj.times.len();
    let guard_idx = traj.band_fraction.iter().position(|&b| b > traj.band_guard);
    let cap_idx = traj.xdot_norm.iter().position(|&x| x > traj.blowup_norm_cap);
    // Growth is read strictly before resolution is lost.
    let last = match guard_idx {
        Some(0) => 0,
        Some(i) => i - 1,
        None => n.saturating_sub(1),
    };
    let growth = |s: &[f64]| {
        if s.is_empty() || !(s[0] > 0.0) {
            return 1.0;
        }
        s[..=last.min(s.len() - 1)].iter().fold(0.0f64, |m, v| m.max(*v)) / s[0]
    };
    let uy_growth = growth(&traj.uy_norm);
    let dinv_uy_growth = growth(&traj.dinv_uy_norm);
    let xdot_growth = growth(&traj.xdot_norm);
    let dominant = if dinv_uy_growth >= uy_growth && dinv_uy_growth >= xdot_growth {
        "dinvUy"
    } else if uy_growth >= xdot_growth {
        "uy"
    } else {
        "xdot"
    };
    let (flagged, reason, flag_time) = match traj.terminated {
        Termination::NanDetected => (true, Some("nan"), traj.times.last().copied()),
        _ => match (cap_idx, guard_idx) {
            (Some(c), Some(g)) if c <= g => (true, Some("normCap"), Some(traj.times[c])),
            (_, Some(g)) => (true, Some("bandGuard"), Some(traj.times[g])),
            (Some(c), None) => (true, Some("normCap"), Some(traj.times[c])),
            (None, None) => (false, None, None),
        },
    };
    BlowupReport {
        flagged,
        reason,
        flag_time,
        uy_growth,
        dinv_uy_growth,
        xdot_growth,
        dominant,
        max_band_fraction: traj.band_fraction.iter().copied().fold(0.0, f64::max),
        band_guard_time: guard_idx.map(|i| traj.times[i]),
    }
}
