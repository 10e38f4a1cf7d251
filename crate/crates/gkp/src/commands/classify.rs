use gkp_core::criteria::{
    blowup_conditions, classify_energy_subcritical, BlowupCase, BlowupConditions, SharpConstants, ThresholdReport,
    Verdict,
};
use gkp_core::evolution::{blowup_monitor, Termination};
use gkp_core::Spectral;
use serde::Serialize;

use super::evolve::{integrate, TrajectorySummary};
use super::{sharp_report, SharpReport};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::formats::{encode_field, trajectory_csv};
use crate::init::initial_field;
use crate::manifest::Outputs;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Confirmation {
    /// `bounded` or `blowup`.
    predicted: &'static str,
    observed_flag: bool,
    termination: Termination,
    agrees: bool,
    trajectory: TrajectorySummary,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyReport {
    sharp_constants: Vec<SharpReport>,
    sharp_error: Option<String>,
    threshold_report: Option<ThresholdReport>,
    blowup_conditions: BlowupConditions,
    confirmation: Option<Confirmation>,
}

/// Case (iii) for `μ₂ < 0 < μ₁`, case (ii) for `μ₁ < 0`, else case (i).
fn auto_case(cfg: &RunConfig) -> BlowupCase {
    let p = &cfg.params;
    if p.mu2 < 0.0 && p.mu1 > 0.0 {
        BlowupCase::Iii
    } else if p.mu1 < 0.0 {
        BlowupCase::Ii
    } else {
        BlowupCase::I
    }
}

/// Sharp constants of the active powers. The inactive slot copies the
/// active one; h does not read it.
fn oracle(cfg: &RunConfig) -> CliResult<(SharpConstants, Vec<SharpReport>)> {
    let p = &cfg.params;
    let sc = p.s_c();
    let first = sharp_report(p.p1, p.alpha, cfg.grid, cfg)?;
    let second = if p.mu2 != 0.0 && p.p2 != p.p1 { sharp_report(p.p2, p.alpha, cfg.grid, cfg)? } else { first };
    let critical_mass = [first, second].iter().find(|s| (s.p - sc).abs() <= 1e-12 * sc).map(|s| s.phi_mass);
    let reports = if p.mu2 != 0.0 && p.p2 != p.p1 { vec![first, second] } else { vec![first] };
    Ok((SharpConstants { rho1: first.rho, rho2: second.rho, critical_mass }, reports))
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> CliResult<()> {
    let sp = Spectral::new(cfg.grid, cfg.params.alpha)?;
    let init = initial_field(cfg, &sp)?;
    let u0 = &init.field;
    out.write("initial.bin", "field", &encode_field(u0, &cfg.params))?;

    // The threshold theorems need sharp constants; when no ground state can
    // be computed for a power the blow-up side is still reported.
    let (threshold_report, sharp_constants, sharp_error) = match oracle(cfg) {
        Ok((o, reports)) => (Some(classify_energy_subcritical(&sp, u0, &cfg.params, &o)?), reports, None),
        Err(e) => (None, Vec::new(), Some(e.to_string())),
    };
    let case = cfg.classify.case.unwrap_or_else(|| auto_case(cfg));
    let c = &cfg.classify;
    let blowup = blowup_conditions(&sp, u0, &cfg.params, case, c.theta, c.tau, c.young)?;

    let predicted = if blowup.verdict == Verdict::BlowupGuaranteed {
        Some("blowup")
    } else if threshold_report.as_ref().is_some_and(|r| r.verdict == Verdict::BoundedGuaranteed) {
        Some("bounded")
    } else {
        None
    };
    let confirmation = match predicted {
        Some(pred) if c.confirm => {
            let traj = integrate(cfg, &sp, u0, &mut |_, _, _| Ok(()))?;
            out.write("confirm_trajectory.csv", "trajectory", &trajectory_csv(&traj, None))?;
            let flag = blowup_monitor(&traj).flagged;
            Some(Confirmation {
                predicted: pred,
                observed_flag: flag,
                termination: traj.terminated,
                agrees: flag == (pred == "blowup"),
                trajectory: TrajectorySummary::of(&traj),
            })
        }
        _ => None,
    };
    let report =
        ClassifyReport { sharp_constants, sharp_error, threshold_report, blowup_conditions: blowup, confirmation };
    out.write_json("classify.json", "report", &report)
}
