//! CSV field dumps and the JSON run manifest.
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::norms::{L1Errors, VarSet};
use crate::linalg::Vector;
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::viscosity::ViscosityField;
use crate::{Error, Result};

/// Shortest round-trip decimal; exponent form for very small or large magnitudes.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(fmt_num).collect::<Vec<_>>().join(",")
}

pub fn write_text(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        }
    }
    fs::write(path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// `kind,x,<vars>`: one `node` row per node (N + 1), then one `cell` row per cell.
pub fn fields_csv_1d<const N: usize>(grid: &Grid1D, field: &HybridField1D<N>, vars: &VarSet<N>) -> String {
    let mut s = format!("kind,x,{}\n", vars.names.join(","));
    for j in 0..=grid.n {
        let _ = writeln!(s, "node,{},{}", fmt_num(grid.node(j)), join((vars.eval)(field.node(j))));
    }
    for (j, w) in field.cells.iter().enumerate() {
        let _ = writeln!(s, "cell,{},{}", fmt_num(grid.center(j)), join((vars.eval)(w)));
    }
    s
}

/// Cell rows only, same layout as [`fields_csv_1d`].
pub fn cells_csv_1d<const N: usize>(grid: &Grid1D, cells: &[Vector<N>], vars: &VarSet<N>) -> String {
    let mut s = format!("kind,x,{}\n", vars.names.join(","));
    for (j, w) in cells.iter().enumerate() {
        let _ = writeln!(s, "cell,{},{}", fmt_num(grid.center(j)), join((vars.eval)(w)));
    }
    s
}

pub fn write_fields_1d<const N: usize>(
    path: &Path,
    grid: &Grid1D,
    field: &HybridField1D<N>,
    vars: &VarSet<N>,
) -> Result<()> {
    write_text(path, &fields_csv_1d(grid, field, vars))
}

/// `(kind, x, values)` of one dump row.
pub type FieldRow = (String, f64, Vec<f64>);

/// Parsed 1D dump: variable names and rows.
pub fn read_fields_1d(path: &Path) -> Result<(Vec<String>, Vec<FieldRow>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Shape(format!("{} is empty", path.display())))?
        .split(',')
        .skip(2)
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let mut it = line.split(',');
        let kind = it.next().unwrap_or_default().to_string();
        let nums = it
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Shape(format!("{} line {}: {e}", path.display(), k + 2)))?;
        if nums.len() != header.len() + 1 {
            return Err(Error::Shape(format!(
                "{} line {}: wrong column count",
                path.display(),
                k + 2
            )));
        }
        rows.push((kind, nums[0], nums[1..].to_vec()));
    }
    Ok((header, rows))
}

fn grid_comment(grid: &Grid2D, what: &str) -> String {
    format!(
        "# {what} x0={} x1={} nx={} y0={} y1={} ny={}\n",
        fmt_num(grid.x.min),
        fmt_num(grid.x.max),
        grid.x.n,
        fmt_num(grid.y.min),
        fmt_num(grid.y.max),
        grid.y.n
    )
}

/// Matrix CSV: a `#` coordinates line, then one row per `j` (bottom to top) of
/// `width` values.
fn matrix_csv(comment: String, values: &[f64], width: usize) -> String {
    let mut s = comment;
    for row in values.chunks(width) {
        s.push_str(&join(row.iter().copied()));
        s.push('\n');
    }
    s
}

/// One file per variable and representation: `{prefix}cells_{var}.csv`
/// (ny rows × nx columns) and `{prefix}nodes_{var}.csv`. Returns the paths written.
pub fn write_fields_2d<const N: usize>(
    dir: &Path,
    prefix: &str,
    grid: &Grid2D,
    field: &HybridField2D<N>,
    vars: &VarSet<N>,
) -> Result<Vec<PathBuf>> {
    let mut paths = write_cells_2d(dir, prefix, grid, &field.cells, vars)?;
    let nodal: Vec<Vec<f64>> = field.nodal.iter().map(|w| (vars.eval)(w)).collect();
    for (k, name) in vars.names.iter().enumerate() {
        let path = dir.join(format!("{prefix}nodes_{name}.csv"));
        let values: Vec<f64> = nodal.iter().map(|v| v[k]).collect();
        let what = format!("nodes var={name} stored_nx={} stored_ny={}", field.nnx, field.nny);
        write_text(&path, &matrix_csv(grid_comment(grid, &what), &values, field.nnx))?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_cells_2d<const N: usize>(
    dir: &Path,
    prefix: &str,
    grid: &Grid2D,
    cells: &[Vector<N>],
    vars: &VarSet<N>,
) -> Result<Vec<PathBuf>> {
    let mapped: Vec<Vec<f64>> = cells.iter().map(|w| (vars.eval)(w)).collect();
    let mut paths = Vec::new();
    for (k, name) in vars.names.iter().enumerate() {
        let path = dir.join(format!("{prefix}cells_{name}.csv"));
        let values: Vec<f64> = mapped.iter().map(|v| v[k]).collect();
        write_text(
            &path,
            &matrix_csv(grid_comment(grid, &format!("cells var={name}")), &values, grid.x.n),
        )?;
        paths.push(path);
    }
    Ok(paths)
}

/// `cell,x,z,activated,nu` per cell.
pub fn viscosity_csv_1d(grid: &Grid1D, v: &ViscosityField) -> String {
    let mut s = String::from("cell,x,z,activated,nu\n");
    for j in 0..grid.n {
        let z = v.z_raw.get(j).copied().unwrap_or(f64::NAN);
        let _ = writeln!(
            s,
            "{j},{},{},{},{}",
            fmt_num(grid.center(j)),
            fmt_num(z),
            fmt_num(v.z_activated[j]),
            fmt_num(v.nu_cell[j])
        );
    }
    s
}

/// Activated indicator and cell viscosity as ny × nx matrices.
pub fn write_viscosity_2d(dir: &Path, prefix: &str, grid: &Grid2D, v: &ViscosityField) -> Result<Vec<PathBuf>> {
    let a = dir.join(format!("{prefix}viscosity_activated.csv"));
    let nu = dir.join(format!("{prefix}viscosity_nu.csv"));
    write_text(
        &a,
        &matrix_csv(grid_comment(grid, "cells var=activated"), &v.z_activated, grid.x.n),
    )?;
    write_text(
        &nu,
        &matrix_csv(grid_comment(grid, "cells var=nu"), &v.nu_cell, grid.x.n),
    )?;
    Ok(vec![a, nu])
}

/// Run summary written as `manifest.json` next to the field files.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub version: &'static str,
    pub problem: String,
    pub scheme: String,
    pub grid: Vec<usize>,
    pub t_end: f64,
    pub t_final: f64,
    pub steps: usize,
    pub alpha_cfl: f64,
    pub z0: f64,
    pub viscosity: bool,
    pub conservation_drift: Vec<f64>,
    pub errors: Option<L1Errors>,
    pub files: Vec<String>,
}

pub const MANIFEST_SCHEMA: u32 = 1;

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).map_err(|e| Error::Numerical(format!("manifest: {e}")))?;
    write_text(path, &(text + "\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-9, 6.02e23, 1e-300, 0.0, 12345.678] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }
}
