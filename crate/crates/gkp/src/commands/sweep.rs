use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use toml::Value;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::formats::{read_field, table_csv};
use crate::manifest::{Outputs, MANIFEST_FILE};

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Cell {
    index: usize,
    directory: String,
    overrides: BTreeMap<String, Value>,
    /// `ok` or `failed`.
    status: &'static str,
    exit_code: i32,
    error: Option<serde_json::Value>,
    manifest: Option<String>,
    artifacts: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SweepIndex {
    command: Command,
    workers: usize,
    cells: Vec<Cell>,
    failures: usize,
}

/// Rough peak footprint of one cell: a few dozen real and complex work
/// arrays of the grid size.
fn cell_bytes(cfg: &RunConfig) -> f64 {
    48.0 * 8.0 * cfg.grid.nx as f64 * cfg.grid.ny as f64
}

/// Cartesian product of the axes, first axis slowest.
fn cells(cfg: &RunConfig) -> Vec<BTreeMap<String, Value>> {
    let mut out = vec![BTreeMap::new()];
    for axis in &cfg.sweep_axes {
        out = out
            .into_iter()
            .flat_map(|base| {
                axis.values.iter().map(move |v| {
                    let mut m = base.clone();
                    m.insert(axis.key.clone(), v.clone());
                    m
                })
            })
            .collect();
    }
    out
}

fn run_cell(cfg: &RunConfig, index: usize, overrides: BTreeMap<String, Value>) -> Cell {
    let directory = format!("cell_{index:04}");
    let mut cell_cfg = cfg.clone();
    cell_cfg.command = cfg.sweep_command;
    cell_cfg.sweep_axes.clear();
    cell_cfg.outputs = cfg.outputs.join(&directory);
    cell_cfg.workers = 1;
    let result = overrides
        .iter()
        .try_for_each(|(k, v)| cell_cfg.set(k, v))
        .and_then(|_| cell_cfg.validate())
        .and_then(|_| super::execute(&cell_cfg));
    let (status, exit_code, error, manifest, artifacts) = match result {
        Ok(m) => ("ok", 0, None, Some(format!("{directory}/{MANIFEST_FILE}")), m.artifacts.len()),
        Err(e) => ("failed", e.exit_code(), Some(e.to_json()), None, 0),
    };
    Cell { index, directory, overrides, status, exit_code, error, manifest, artifacts }
}

pub fn run(cfg: &RunConfig, out: &mut Outputs) -> CliResult<()> {
    if cfg.sweep_axes.is_empty() {
        return Err(CliError::invalid_field("sweep.axes", "at least one axis is required"));
    }
    let need_mb = cell_bytes(cfg) * cfg.workers as f64 / (1024.0 * 1024.0);
    if need_mb > cfg.memory_cap_mb {
        return Err(CliError::invalid_field(
            "sweep.memoryCapMb",
            format!("estimated {need_mb:.0} MB for {} workers exceeds the cap", cfg.workers),
        ));
    }
    let list = cells(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::numerical(format!("worker pool: {e}")))?;
    // Each worker owns its cell end to end; results come back in index order.
    let results: Vec<Cell> =
        pool.install(|| list.into_par_iter().enumerate().map(|(i, o)| run_cell(cfg, i, o)).collect());

    if cfg.sweep_command == Command::Groundstate {
        write_overlay(cfg, &results, out)?;
    }
    let failures = results.iter().filter(|c| c.status != "ok").count();
    let index = SweepIndex { command: cfg.sweep_command, workers: cfg.workers, cells: results, failures };
    out.write_json("index.json", "index", &index)
}

/// XZ centerline of every successful ground-state cell, one column per
/// cell (`cell_0000`, …); missing cells are left out.
fn write_overlay(cfg: &RunConfig, cells: &[Cell], out: &mut Outputs) -> CliResult<()> {
    let g = cfg.grid;
    let mut header = vec!["x".to_string()];
    let mut columns = Vec::new();
    for c in cells.iter().filter(|c| c.status == "ok") {
        let (u, _) = read_field(&cfg.outputs.join(&c.directory).join("profile.bin"))?;
        if *u.grid() != g {
            continue;
        }
        header.push(c.directory.clone());
        columns.push((0..g.nx).map(|i| u.at(i, g.ny / 2)).collect::<Vec<_>>());
    }
    let names: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows = (0..g.nx).map(|i| {
        let mut r = vec![g.x(i)];
        r.extend(columns.iter().map(|c| c[i]));
        r
    });
    out.write("overlay.csv", "overlay", &table_csv(&names, rows))
}
