use gkp_core::functionals::DiagnosticsRecord;
use gkp_core::ground_state::petviashvili_general;
use gkp_core::{GridSpec, PhysicalParams, Spectral};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::formats::{encode_field, field_csv, slices_csv};
use crate::manifest::Outputs;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct GroundStateReport {
    params: PhysicalParams,
    grid: GridSpec,
    speed: f64,
    converged: bool,
    iterations: usize,
    residual_norm: f64,
    action: f64,
    nehari: f64,
    i_value: f64,
    pohozaev_residuals: Vec<f64>,
    /// Sign of the extremal value.
    polarity: f64,
    peak: f64,
    boundary_ratio: f64,
    diagnostics: DiagnosticsRecord,
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> CliResult<()> {
    let sp = Spectral::new(cfg.grid, cfg.params.alpha)?;
    let gs = petviashvili_general(&sp, &cfg.params, cfg.speed, None, &cfg.solver)?;
    out.write("profile.bin", "field", &encode_field(&gs.profile, &cfg.params))?;
    out.write("profile.csv", "surface", &field_csv(&gs.profile))?;
    out.write("slices.csv", "slices", &slices_csv(&gs.profile))?;
    let report = GroundStateReport {
        params: cfg.params,
        grid: cfg.grid,
        speed: gs.speed,
        converged: gs.converged,
        iterations: gs.iterations,
        residual_norm: gs.residual_norm,
        action: gs.action_value,
        nehari: gs.nehari(),
        i_value: gs.i_value(),
        pohozaev_residuals: gs.pohozaev_residuals.clone(),
        polarity: gs.polarity(),
        peak: gs.profile.extremum(),
        boundary_ratio: gs.boundary_ratio,
        diagnostics: DiagnosticsRecord::from_norms(&gs.norms, &cfg.params),
    };
    out.write_json("diagnostics.json", "report", &report)
}
