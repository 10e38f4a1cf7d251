//! File formats.
//!
//! Field binary (`.bin`), all little-endian:
//!
//! | offset | type      | value |
//! |-------:|-----------|-------|
//! | 0      | u64       | nx    |
//! | 8      | u64       | ny    |
//! | 16     | f64 × 8   | Lx, Ly, α, p₁, p₂, μ₁, μ₂, ε |
//! | 80     | f64 × nx·ny | values, row-major with the x index outer: `u(x_i, y_j)` at `i·ny + j` |
//!
//! with `x_i = −Lx/2 + i·Lx/nx` and likewise for y.
//!
//! Field CSV: header `x,y,u`, one row per grid point in the same order.
//!
//! Trajectory CSV: header [`trajectory_columns`], one row per sample.
//! Columns are only ever appended, never reordered.

use std::path::Path;

use gkp_core::evolution::TrajectoryDiagnostics;
use gkp_core::functionals::DiagnosticsRecord;
use gkp_core::{Field, GridSpec, PhysicalParams};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const FIELD_HEADER_BYTES: usize = 80;

/// Everything after `t` and the [`DiagnosticsRecord::COLUMNS`] block.
pub const TRAJECTORY_EXTRA: [&str; 12] = [
    "virial",
    "virialRhs",
    "xMoment",
    "xMomentRhs",
    "bandFraction",
    "uyNorm",
    "dinvUyNorm",
    "xdotNorm",
    "realnessDefect",
    "xmeanDefect",
    "boundaryRatio",
    "referenceError",
];

/// `t`, the 14 diagnostics columns, then [`TRAJECTORY_EXTRA`].
pub fn trajectory_columns() -> Vec<&'static str> {
    let mut c = vec!["t"];
    c.extend(DiagnosticsRecord::COLUMNS);
    c.extend(TRAJECTORY_EXTRA);
    c
}

pub fn encode_field(u: &Field, p: &PhysicalParams) -> Vec<u8> {
    let g = u.grid();
    let mut out = Vec::with_capacity(FIELD_HEADER_BYTES + 8 * g.len());
    out.extend_from_slice(&(g.nx as u64).to_le_bytes());
    out.extend_from_slice(&(g.ny as u64).to_le_bytes());
    for v in [g.lx, g.ly, p.alpha, p.p1, p.p2, p.mu1, p.mu2, p.eps] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in u.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> CliResult<(Field, PhysicalParams)> {
    let bad = |m: &str| CliError::invalid(format!("field file: {m}"));
    if bytes.len() < FIELD_HEADER_BYTES {
        return Err(bad("shorter than the header"));
    }
    let word = |i: usize| <[u8; 8]>::try_from(&bytes[8 * i..8 * i + 8]).expect("8 bytes");
    let nx = u64::from_le_bytes(word(0)) as usize;
    let ny = u64::from_le_bytes(word(1)) as usize;
    let f = |i: usize| f64::from_le_bytes(word(i));
    let grid = GridSpec::new(nx, ny, f(2), f(3))?;
    let params = PhysicalParams { alpha: f(4), p1: f(5), p2: f(6), mu1: f(7), mu2: f(8), eps: f(9) };
    let body = &bytes[FIELD_HEADER_BYTES..];
    if body.len() != 8 * grid.len() {
        return Err(bad("body length does not match nx*ny"));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok((Field::from_values(grid, values)?, params))
}

pub fn read_field(path: &Path) -> CliResult<(Field, PhysicalParams)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::read(path, e))?;
    decode_field(&bytes)
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v:e}"))).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn field_csv(u: &Field) -> Vec<u8> {
    let g = *u.grid();
    let rows = (0..g.nx).flat_map(move |i| (0..g.ny).map(move |j| vec![g.x(i), g.y(j), u.at(i, j)]));
    csv_bytes(&["x", "y", "u"], rows)
}

/// Centerline slices: `u(x, 0)` (XZ plane) and `u(0, y)` (YZ plane),
/// stacked as `axis,coord,u` with axis 0 for x and 1 for y.
pub fn slices_csv(u: &Field) -> Vec<u8> {
    let g = *u.grid();
    let (i0, j0) = (g.nx / 2, g.ny / 2);
    let xs = (0..g.nx).map(move |i| vec![0.0, g.x(i), u.at(i, j0)]);
    let ys = (0..g.ny).map(move |j| vec![1.0, g.y(j), u.at(i0, j)]);
    csv_bytes(&["axis", "coord", "u"], xs.chain(ys))
}

/// Trajectory table. `reference` fills `referenceError`, the distance to a
/// known solution where one exists (NaN otherwise).
pub fn trajectory_csv(traj: &TrajectoryDiagnostics, reference: Option<&[f64]>) -> Vec<u8> {
    let cols = trajectory_columns();
    let rows = (0..traj.times.len()).map(|i| {
        let mut r = vec![traj.times[i]];
        r.extend(traj.records[i].values());
        r.extend([
            traj.virial[i],
            traj.virial_rhs[i],
            traj.x_moment[i],
            traj.x_moment_rhs[i],
            traj.band_fraction[i],
            traj.uy_norm[i],
            traj.dinv_uy_norm[i],
            traj.xdot_norm[i],
            traj.realness_defect[i],
            traj.xmean_defect[i],
            traj.boundary_ratio[i],
            reference.and_then(|e| e.get(i).copied()).unwrap_or(f64::NAN),
        ]);
        r
    });
    csv_bytes(&cols, rows)
}

/// Generic table writer for reports that are not trajectories.
pub fn table_csv(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Vec<u8> {
    csv_bytes(header, rows)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
