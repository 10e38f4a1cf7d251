//! One function per subcommand. Each writes its artifacts through
//! [`Outputs`] and returns `Ok` only when the run itself succeeded; sweep
//! cells and validation failures are reported inside their artifacts.

mod classify;
mod evolve;
mod groundstate;
mod instability;
mod sweep;
mod validate;

use gkp_core::functionals::sharp_constant_forms;
use gkp_core::ground_state::petviashvili;
use gkp_core::GridSpec;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::{Outputs, RunManifest};

pub use validate::InvariantResult;

/// Runs `cfg.command` into `cfg.outputs` and writes the manifest.
pub fn execute(cfg: &RunConfig) -> CliResult<RunManifest> {
    let mut out = Outputs::create(&cfg.outputs)?;
    match cfg.command {
        Command::Groundstate => groundstate::run(cfg, &mut out)?,
        Command::Evolve => evolve::run(cfg, &mut out)?,
        Command::Classify => classify::run(cfg, &mut out)?,
        Command::Instability => instability::run(cfg, &mut out)?,
        Command::Sweep => sweep::run(cfg, &mut out)?,
        Command::Validate => {
            // The report and manifest are written before the failure is raised.
            let failed = validate::run(cfg, &mut out)?;
            let m = out.finish(cfg)?;
            if !failed.is_empty() {
                return Err(CliError::numerical(format!("invariants failed: {}", failed.join(", "))));
            }
            return Ok(m);
        }
    }
    out.finish(cfg)
}

/// Sharp constant of the single power `|u|^{p−1}u` read off its ground state.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SharpReport {
    pub p: f64,
    pub rho: f64,
    pub rho_mass: f64,
    pub rel_diff: f64,
    /// `‖φ‖²` of the unit-speed ground state.
    pub phi_mass: f64,
    pub action: f64,
    pub residual: f64,
}

pub(crate) fn sharp_report(p: f64, alpha: f64, grid: GridSpec, cfg: &RunConfig) -> CliResult<SharpReport> {
    let gs = petviashvili(p, alpha, grid, &cfg.solver)?;
    let s = sharp_constant_forms(gs.norms.mass, gs.action_value, p, alpha);
    Ok(SharpReport {
        p,
        rho: s.rho(),
        rho_mass: s.rho_mass,
        rel_diff: s.rel_diff,
        phi_mass: gs.norms.mass,
        action: gs.action_value,
        residual: gs.residual_norm,
    })
}
