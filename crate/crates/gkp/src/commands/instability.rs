use gkp_core::criteria::{instability_data, instability_scan, lambda_membership, InstabilityTrial, LambdaReport};
use gkp_core::ground_state::petviashvili_general;
use gkp_core::{Error, Spectral};
use serde::Serialize;

use super::evolve::{integrate, TrajectorySummary};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::formats::{encode_field, trajectory_csv};
use crate::manifest::Outputs;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SetupReport {
    b: f64,
    d: f64,
    big_b: f64,
    big_d: f64,
    r_bd: f64,
    r_bdm1: f64,
    action_w: f64,
    m_estimate: f64,
    delta_distance: f64,
    requested_delta: f64,
    band_fraction: f64,
    trace: Vec<InstabilityTrial>,
    ground_state_residual: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ControlReport {
    scale: f64,
    membership: LambdaReport,
    trajectory: TrajectorySummary,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct InstabilitySummary {
    unstable: TrajectorySummary,
    control: ControlReport,
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> CliResult<()> {
    let opt = &cfg.instability;
    let sp = Spectral::new(cfg.grid, cfg.params.alpha)?;
    if !(opt.bd > 1.0) {
        return Err(CliError::invalid_field("instability.bd", "must exceed 1"));
    }
    let gs = petviashvili_general(&sp, &cfg.params, 1.0, None, &cfg.solver)?;
    let guard = cfg.stepper.band_guard;
    let setup = match instability_data(&sp, &gs, &cfg.params, opt.b, opt.bd, guard) {
        Ok(s) => s,
        Err(Error::NotAdmissible { last_b }) => {
            let trace = instability_scan(&sp, &gs, &cfg.params, opt.b, opt.bd, guard)?.trace;
            return Err(CliError::numerical(format!("no admissible b up to {last_b}"))
                .with_detail(serde_json::to_value(trace).expect("trace serializes")));
        }
        Err(e) => return Err(e.into()),
    };
    let report = SetupReport {
        b: setup.b,
        d: setup.d,
        big_b: setup.big_b,
        big_d: setup.big_d,
        r_bd: setup.r_bd,
        r_bdm1: setup.r_bdm1,
        action_w: setup.action_w,
        m_estimate: setup.m_estimate,
        delta_distance: setup.delta_distance,
        requested_delta: opt.delta,
        band_fraction: setup.band_fraction,
        trace: setup.trace.clone(),
        ground_state_residual: gs.residual_norm,
    };
    out.write_json("setup.json", "report", &report)?;
    if setup.delta_distance > opt.delta {
        return Err(CliError::numerical(format!(
            "delta-distance {} exceeds the requested {}",
            setup.delta_distance, opt.delta
        )));
    }
    out.write("unstable_initial.bin", "field", &encode_field(&setup.w, &cfg.params))?;
    let traj = integrate(cfg, &sp, &setup.w, &mut |_, _, _| Ok(()))?;
    out.write("trajectory.csv", "trajectory", &trajectory_csv(&traj, None))?;

    // Control: λφ with λ < 1 sits below m by O((1−λ)²) and raises R, so it
    // lies in Λ⁺. The BD < 1 dilation is only second-order below m and
    // lands on the boundary within discretization error.
    let lambda = opt.control_scale;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(CliError::invalid_field("instability.controlScale", "must lie in (0, 1)"));
    }
    let wc = gs.profile.scaled(lambda);
    let membership = lambda_membership(&sp, &wc, &cfg.params, setup.b, setup.d, setup.m_estimate)?;
    out.write("control_initial.bin", "field", &encode_field(&wc, &cfg.params))?;
    let ctraj = integrate(cfg, &sp, &wc, &mut |_, _, _| Ok(()))?;
    out.write("control.csv", "trajectory", &trajectory_csv(&ctraj, None))?;

    let summary = InstabilitySummary {
        unstable: TrajectorySummary::of(&traj),
        control: ControlReport { scale: lambda, membership, trajectory: TrajectorySummary::of(&ctraj) },
    };
    out.write_json("summary.json", "report", &summary)
}
