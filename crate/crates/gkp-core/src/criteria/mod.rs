//! Decision formulas: boundedness thresholds, blow-up cases, the invariant
//! sets Λ±, the instability construction and the d''(1) probe.
//!
//! Every verdict is three-valued. A failed hypothesis never turns into a
//! statement about the solution.

mod blowup;
mod instability;
mod thresholds;

pub use blowup::{
    blowup_conditions, exponent_bounds_check, search_theta_tau, young_constant, young_constant_grid, BlowupCase,
    BlowupConditions, ExponentBounds, YoungExponents,
};
pub use instability::{
    d_second_derivative, dilate, instability_data, instability_scan, lambda_membership, DProbe, InstabilitySetup,
    InstabilityTrial, LambdaReport, Membership,
};
pub use thresholds::{
    classify_energy_subcritical, h_eval, h_exponent, z0_and_z1, CriticalRadius, HParams, RadiusKind, Regime,
    SharpConstants, ThresholdReport,
};

use alloc::string::String;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    BoundedGuaranteed,
    BlowupGuaranteed,
    HypothesesNotMet,
    Indeterminate,
}

/// One named hypothesis and, where it is an inequality, its slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
}

impl Check {
    pub fn new(name: &str, holds: bool) -> Self {
        Check { name: name.into(), holds, value: None }
    }

    pub fn with_value(name: &str, holds: bool, value: f64) -> Self {
        Check { name: name.into(), holds, value: Some(value) }
    }
}

/// Looks a check up by name.
pub fn find_check<'a>(checks: &'a [Check], name: &str) -> Option<&'a Check> {
    checks.iter().find(|c| c.name == name)
}
