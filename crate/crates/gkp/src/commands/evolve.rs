use gkp_core::evolution::{
    blowup_monitor, run_observed, virial_series, x_moment_series, BlowupReport, Termination, TrajectoryDiagnostics,
};
use gkp_core::functionals::DiagnosticsRecord;
use gkp_core::{Field, Spectral};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::formats::{encode_field, trajectory_csv};
use crate::init::{initial_field, reference_error, Reference};
use crate::manifest::Outputs;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub(crate) struct TrajectorySummary {
    pub termination: Termination,
    pub final_time: f64,
    pub samples: usize,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub momentum_drift: f64,
    pub max_sup_norm: f64,
    pub max_xdot_norm: f64,
    pub max_band_fraction: f64,
    pub blowup: BlowupReport,
    pub initial: Option<DiagnosticsRecord>,
    pub last: Option<DiagnosticsRecord>,
}

impl TrajectorySummary {
    pub fn of(traj: &TrajectoryDiagnostics) -> Self {
        let fold = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        TrajectorySummary {
            termination: traj.terminated,
            final_time: traj.final_time(),
            samples: traj.times.len(),
            mass_drift: traj.mass_drift(),
            energy_drift: traj.energy_drift(),
            momentum_drift: traj.momentum_drift(),
            max_sup_norm: traj.records.iter().map(|r| r.sup_norm).fold(0.0, f64::max),
            max_xdot_norm: fold(&traj.xdot_norm),
            max_band_fraction: fold(&traj.band_fraction),
            blowup: blowup_monitor(traj),
            initial: traj.records.first().copied(),
            last: traj.records.last().copied(),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ReferenceSummary {
    /// `travelingWave` or `linearMode`.
    kind: &'static str,
    max_error: f64,
    final_error: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct EvolveSummary {
    trajectory: TrajectorySummary,
    reference: Option<ReferenceSummary>,
    virial_max_rel_error: Option<f64>,
    x_moment_max_rel_error: Option<f64>,
    snapshots: usize,
}

/// Integrates `u0`, calling `at_sample` with every sampled state.
pub(crate) fn integrate(
    cfg: &RunConfig,
    sp: &Spectral,
    u0: &Field,
    at_sample: &mut dyn FnMut(usize, f64, &Field) -> CliResult<()>,
) -> CliResult<TrajectoryDiagnostics> {
    let mut failure = None;
    let mut k = 0;
    let traj = run_observed(sp, u0, &cfg.params, &cfg.stepper, &mut |t, u| {
        if failure.is_none() {
            if let Err(e) = at_sample(k, t, u) {
                failure = Some(e);
            }
        }
        k += 1;
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> CliResult<()> {
    let sp = Spectral::new(cfg.grid, cfg.params.alpha)?;
    let init = initial_field(cfg, &sp)?;
    let mut errors = Vec::new();
    let mut snapshots = 0;
    let traj = integrate(cfg, &sp, &init.field, &mut |k, t, u| {
        if let Some(r) = &init.reference {
            errors.push(reference_error(&sp, r, t, u));
        }
        if cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0 {
            out.write(&format!("snapshot_{k:05}.bin"), "field", &encode_field(u, &cfg.params))?;
            snapshots += 1;
        }
        Ok(())
    })?;
    if traj.terminated == Termination::NanDetected && traj.times.len() <= 1 {
        return Err(CliError::numerical("non-finite state in the first step"));
    }
    out.write("trajectory.csv", "trajectory", &trajectory_csv(&traj, init.reference.as_ref().map(|_| &errors[..])))?;
    let reference = init.reference.as_ref().map(|r| ReferenceSummary {
        kind: match r {
            Reference::Comoving { .. } => "travelingWave",
            Reference::LinearMode { .. } => "linearMode",
        },
        max_error: errors.iter().copied().fold(0.0, f64::max),
        final_error: errors.last().copied().unwrap_or(f64::NAN),
    });
    let summary = EvolveSummary {
        trajectory: TrajectorySummary::of(&traj),
        reference,
        virial_max_rel_error: virial_series(&traj).ok().map(|m| m.max_rel_error),
        x_moment_max_rel_error: x_moment_series(&traj).ok().map(|m| m.max_rel_error),
        snapshots,
    };
    out.write_json("summary.json", "report", &summary)
}
