//! Residual-consistent artificial viscosity.
//!
//! Per step: cellular entropy residual (BDF in time, centred in space), a
//! dimensionless indicator `Z`, then `M ∘ S ∘ N` (normalise, sharpen, smooth)
//! gives an activation factor in `[0, 1]` that scales the von Neumann-Richtmyer
//! coefficient `h v_max / 4`. Nodal coefficients average the adjacent cells and
//! stay frozen over the RK stages of the step.

use std::collections::VecDeque;

use crate::error::Result;
use crate::linalg::{self, Vector};
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::physics::{EntropyPair, Model1D, Model2D};
use crate::rhs1d::at;

pub const DEFAULT_Z0: f64 = 0.04;
/// Guard in the indicator denominator.
pub const EPSILON: f64 = 1e-16;
/// Below this speed the 2D length scale falls back to `min(hx, hy)`.
pub const STAGNATION_SPEED: f64 = 1e-14;

/// The last two cell-average entropy fields with their times.
#[derive(Debug, Clone, Default)]
pub struct ResidualHistory {
    entries: VecDeque<(f64, Vec<f64>)>,
    /// Number of fields pushed so far.
    pub n: usize,
}

impl ResidualHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// BDF order used at the current step: `min(n, 2)`.
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, t: f64, s_cells: Vec<f64>) {
        if let Some((last, _)) = self.entries.back() {
            debug_assert!(t > *last, "history timestamps must increase");
        }
        self.entries.push_back((t, s_cells));
        if self.entries.len() > 2 {
            self.entries.pop_front();
        }
        self.n += 1;
    }

    /// `ds/dt` at time `t` for cell values `s`; zero when no history exists.
    /// Two stored levels give variable-step BDF2.
    pub fn time_derivative(&self, t: f64, s: &[f64]) -> Vec<f64> {
        match self.entries.len() {
            0 => vec![0.0; s.len()],
            1 => {
                let (t1, s1) = &self.entries[0];
                let inv = 1.0 / (t - t1);
                s.iter().zip(s1).map(|(a, b)| (a - b) * inv).collect()
            }
            _ => {
                let (t2, s2) = &self.entries[0];
                let (t1, s1) = &self.entries[1];
                let tau1 = t - t1;
                let omega = tau1 / (t1 - t2);
                let c0 = (1.0 + 2.0 * omega) / (1.0 + omega);
                let c1 = -(1.0 + omega);
                let c2 = omega * omega / (1.0 + omega);
                s.iter()
                    .zip(s1)
                    .zip(s2)
                    .map(|((a, b), c)| (c0 * a + c1 * b + c2 * c) / tau1)
                    .collect()
            }
        }
    }
}

/// Domain statistics feeding the indicator denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalStats {
    pub s_bar: f64,
    pub delta_s: f64,
    /// Computed for completeness; the indicator does not use it.
    pub big_s_bar: f64,
    pub delta_big_s: f64,
    pub rho_bar: f64,
}

/// `z̄` is the mean of `|z|` over cells, `δz` the largest deviation from `z̄` over
/// nodes and cells. Samples are `(entropy pair, density)`.
pub fn global_stats(nodes: &[(EntropyPair, f64)], cells: &[(EntropyPair, f64)]) -> GlobalStats {
    let nc = cells.len() as f64;
    let mean = |f: &dyn Fn(&(EntropyPair, f64)) -> f64| cells.iter().map(|c| f(c).abs()).sum::<f64>() / nc;
    let dev = |f: &dyn Fn(&(EntropyPair, f64)) -> f64, m: f64| {
        nodes
            .iter()
            .chain(cells)
            .fold(0.0_f64, |acc, c| acc.max((f(c) - m).abs()))
    };
    let fs = |c: &(EntropyPair, f64)| c.0.s;
    let fbig = |c: &(EntropyPair, f64)| c.0.big_s;
    let frho = |c: &(EntropyPair, f64)| c.1;
    let s_bar = mean(&fs);
    let big_s_bar = mean(&fbig);
    GlobalStats {
        s_bar,
        delta_s: dev(&fs, s_bar),
        big_s_bar,
        delta_big_s: dev(&fbig, big_s_bar),
        rho_bar: mean(&frho),
    }
}

/// Per-cell viscosity data for one step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ViscosityField {
    pub z_raw: Vec<f64>,
    pub z_activated: Vec<f64>,
    pub nu_cell: Vec<f64>,
    pub nu_node: Vec<f64>,
}

/// Indicator `Z = (h |Res| / v_max) / (δs + δS/ρ̄ + ε s̄)` with per-cell `h`, `v_max`.
pub fn indicator(residual: &[f64], stats: &GlobalStats, vmax: &[f64], h: &[f64]) -> Vec<f64> {
    let denom = stats.delta_s + stats.delta_big_s / stats.rho_bar + EPSILON * stats.s_bar;
    residual
        .iter()
        .zip(vmax)
        .zip(h)
        .map(|((r, v), h)| if *v > 0.0 { h * r.abs() / v / denom } else { 0.0 })
        .collect()
}

/// `Z / max(1, max Z)`.
pub fn normalize(z: &[f64]) -> Vec<f64> {
    let m = z.iter().fold(1.0_f64, |a, b| a.max(*b));
    z.iter().map(|v| v / m).collect()
}

/// `1/2 - cos(π min(z/z0, 1))/2`.
#[inline]
pub fn sharpen(z: f64, z0: f64) -> f64 {
    0.5 - 0.5 * (std::f64::consts::PI * (z / z0).min(1.0)).cos()
}

fn max_pass_line(z: &[f64], periodic: bool) -> Vec<f64> {
    let n = z.len();
    (0..n)
        .map(|i| {
            let (l, r) = if periodic {
                (z[(i + n - 1) % n], z[(i + 1) % n])
            } else {
                (z[i.saturating_sub(1)], z[(i + 1).min(n - 1)])
            };
            z[i].max(l).max(r)
        })
        .collect()
}

fn ave_pass_line(z: &[f64], periodic: bool) -> Vec<f64> {
    let n = z.len();
    (0..n)
        .map(|i| {
            if periodic {
                (z[(i + n - 1) % n] + 4.0 * z[i] + z[(i + 1) % n]) / 6.0
            } else if i == 0 {
                (2.0 * z[0] + z[1]) / 3.0
            } else if i == n - 1 {
                (2.0 * z[n - 1] + z[n - 2]) / 3.0
            } else {
                (z[i - 1] + 4.0 * z[i] + z[i + 1]) / 6.0
            }
        })
        .collect()
}

/// `M_ave^3 ∘ M_max^2` on a line of cells.
pub fn smooth_1d(z: &[f64], periodic: bool) -> Vec<f64> {
    let mut v = max_pass_line(z, periodic);
    v = max_pass_line(&v, periodic);
    for _ in 0..3 {
        v = ave_pass_line(&v, periodic);
    }
    v
}

/// Apply a line operator along x (rows) or y (columns) of an `nx × ny` array.
fn along(z: &[f64], nx: usize, ny: usize, x_dir: bool, f: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let mut out = vec![0.0; z.len()];
    if x_dir {
        for j in 0..ny {
            let row = f(&z[j * nx..(j + 1) * nx]);
            out[j * nx..(j + 1) * nx].copy_from_slice(&row);
        }
    } else {
        let mut col = vec![0.0; ny];
        for i in 0..nx {
            for j in 0..ny {
                col[j] = z[j * nx + i];
            }
            for (j, v) in f(&col).into_iter().enumerate() {
                out[j * nx + i] = v;
            }
        }
    }
    out
}

/// 2D smoother: the 3×3 max is separable (row max then column max); each
/// averaging application is an x-pass followed by a y-pass.
pub fn smooth_2d(z: &[f64], nx: usize, ny: usize, periodic_x: bool, periodic_y: bool) -> Vec<f64> {
    let mut v = z.to_vec();
    for _ in 0..2 {
        v = along(&v, nx, ny, true, |l| max_pass_line(l, periodic_x));
        v = along(&v, nx, ny, false, |l| max_pass_line(l, periodic_y));
    }
    for _ in 0..3 {
        v = along(&v, nx, ny, true, |l| ave_pass_line(l, periodic_x));
        v = along(&v, nx, ny, false, |l| ave_pass_line(l, periodic_y));
    }
    v
}

/// `Res = ds̄/dt + v̄ (s(W_{j+1}) - s(W_j)) / h` for every cell.
pub fn cellular_residual_1d<const N: usize, M: Model1D<N>>(
    history: &ResidualHistory,
    state: &HybridField1D<N>,
    model: &M,
    grid: &Grid1D,
    t: f64,
) -> Result<Vec<f64>> {
    let s_cells = cell_entropy_1d(state, model)?;
    let mut res = history.time_derivative(t, &s_cells);
    let mut s_left = model.entropy(state.node(0)).map_err(at(|| "node 0".into()))?.s;
    for (j, r) in res.iter_mut().enumerate() {
        let s_right = model
            .entropy(state.node(j + 1))
            .map_err(at(|| format!("node {}", j + 1)))?
            .s;
        *r += model.velocity(&state.cells[j]) * (s_right - s_left) / grid.h;
        s_left = s_right;
    }
    Ok(res)
}

fn cell_entropy_1d<const N: usize, M: Model1D<N>>(state: &HybridField1D<N>, model: &M) -> Result<Vec<f64>> {
    state
        .cells
        .iter()
        .enumerate()
        .map(|(j, w)| Ok(model.entropy(w).map_err(at(|| format!("cell {j}")))?.s))
        .collect()
}

fn stats_1d<const N: usize, M: Model1D<N>>(state: &HybridField1D<N>, model: &M) -> Result<GlobalStats> {
    let sample = |w: &Vector<N>| -> Result<(EntropyPair, f64)> { Ok((model.entropy(w)?, model.density(w))) };
    let nodes = state.nodal.iter().map(sample).collect::<Result<Vec<_>>>()?;
    let cells = state.cells.iter().map(sample).collect::<Result<Vec<_>>>()?;
    Ok(global_stats(&nodes, &cells))
}

/// `ν_cell = (h v_max / 4) · activated`, nodes average adjacent cells.
pub fn assemble_viscosity_1d<const N: usize, M: Model1D<N>>(
    state: &HybridField1D<N>,
    activated: &[f64],
    model: &M,
    grid: &Grid1D,
) -> Result<ViscosityField> {
    let nu_cell = state
        .cells
        .iter()
        .zip(activated)
        .map(|(w, a)| Ok(0.25 * grid.h * model.max_speed(w)? * a))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ViscosityField {
        z_raw: Vec::new(),
        z_activated: activated.to_vec(),
        nu_node: nodal_from_cells_1d(&nu_cell, grid),
        nu_cell,
    })
}

/// Average of the adjacent cells; end nodes of bounded grids take their one cell.
pub fn nodal_from_cells_1d(nu_cell: &[f64], grid: &Grid1D) -> Vec<f64> {
    let n = grid.n;
    (0..grid.n_nodes())
        .map(|j| {
            if grid.periodic {
                0.5 * (nu_cell[(j + n - 1) % n] + nu_cell[j % n])
            } else if j == 0 {
                nu_cell[0]
            } else if j == n {
                nu_cell[n - 1]
            } else {
                0.5 * (nu_cell[j - 1] + nu_cell[j])
            }
        })
        .collect()
}

/// Full 1D pipeline at the start of a step; pushes the current entropy into the history.
pub fn viscosity_1d<const N: usize, M: Model1D<N>>(
    history: &mut ResidualHistory,
    state: &HybridField1D<N>,
    model: &M,
    grid: &Grid1D,
    t: f64,
    z0: f64,
) -> Result<ViscosityField> {
    let res = cellular_residual_1d(history, state, model, grid, t)?;
    let stats = stats_1d(state, model)?;
    let vmax = state
        .cells
        .iter()
        .map(|w| Ok(model.max_speed(w)?))
        .collect::<Result<Vec<f64>>>()?;
    let z = indicator(&res, &stats, &vmax, &vec![grid.h; grid.n]);
    let sharpened: Vec<f64> = normalize(&z).iter().map(|v| sharpen(*v, z0)).collect();
    let activated = smooth_1d(&sharpened, grid.periodic);
    let mut field = assemble_viscosity_1d(state, &activated, model, grid)?;
    field.z_raw = z;
    history.push(t, cell_entropy_1d(state, model)?);
    Ok(field)
}

/// Source term `B(x, y, t, W)` of `W_t + ∇·F + B = 0`.
pub trait Source2D<const N: usize>: Send + Sync {
    fn eval(&self, x: f64, y: f64, t: f64, w: &Vector<N>) -> Vector<N>;
}

/// Cellular residual with corner-averaged differences and the source correction
/// `(∂s/∂W)·B` at the cell centre.
pub fn cellular_residual_2d<const N: usize, M: Model2D<N>>(
    history: &ResidualHistory,
    state: &HybridField2D<N>,
    model: &M,
    grid: &Grid2D,
    t: f64,
    source: Option<&dyn Source2D<N>>,
) -> Result<Vec<f64>> {
    let s_cells = cell_entropy_2d(state, model)?;
    let mut res = history.time_derivative(t, &s_cells);
    let s_nodes = state
        .nodal
        .iter()
        .enumerate()
        .map(|(k, w)| Ok(model.entropy(w).map_err(at(|| format!("node {k}")))?.s))
        .collect::<Result<Vec<f64>>>()?;
    let nnx = state.nnx;
    let sn = |i: usize, j: usize| {
        let i = if i == nnx { 0 } else { i };
        let j = if j == state.nny { 0 } else { j };
        s_nodes[j * nnx + i]
    };
    let (hx, hy) = (grid.x.h, grid.y.h);
    for j in 0..grid.y.n {
        for i in 0..grid.x.n {
            let c = j * grid.x.n + i;
            let w = &state.cells[c];
            let [v1, v2] = model.velocity(w);
            let (s00, s10, s01, s11) = (sn(i, j), sn(i + 1, j), sn(i, j + 1), sn(i + 1, j + 1));
            let mut r = v1 * (s10 + s11 - s00 - s01) / (2.0 * hx) + v2 * (s01 + s11 - s00 - s10) / (2.0 * hy);
            if let Some(src) = source {
                let b = src.eval(grid.x.center(i), grid.y.center(j), t, w);
                let g = model.entropy_gradient(w).map_err(at(|| format!("cell ({i}, {j})")))?;
                r += linalg::dot(&g, &b);
            }
            res[c] += r;
        }
    }
    Ok(res)
}

fn cell_entropy_2d<const N: usize, M: Model2D<N>>(state: &HybridField2D<N>, model: &M) -> Result<Vec<f64>> {
    state
        .cells
        .iter()
        .enumerate()
        .map(|(k, w)| Ok(model.entropy(w).map_err(at(|| format!("cell {k}")))?.s))
        .collect()
}

/// Mesh length along the flow direction, `(hx|v1| + hy|v2|)/|v|`.
pub fn directional_length(hx: f64, hy: f64, v: [f64; 2]) -> f64 {
    let speed = v[0].hypot(v[1]);
    if speed < STAGNATION_SPEED {
        hx.min(hy)
    } else {
        (hx * v[0].abs() + hy * v[1].abs()) / speed
    }
}

/// Average of the adjacent in-domain cells of each stored node.
pub fn nodal_from_cells_2d(nu_cell: &[f64], grid: &Grid2D) -> Vec<f64> {
    let (nx, ny) = (grid.x.n, grid.y.n);
    let (nnx, nny) = (grid.nnx(), grid.nny());
    let cols = |i: usize, periodic: bool, n: usize| -> ([usize; 2], usize) {
        if periodic {
            ([(i + n - 1) % n, i % n], 2)
        } else if i == 0 {
            ([0, 0], 1)
        } else if i == n {
            ([n - 1, n - 1], 1)
        } else {
            ([i - 1, i], 2)
        }
    };
    let mut out = vec![0.0; nnx * nny];
    for j in 0..nny {
        let (rj, cj) = cols(j, grid.y.periodic, ny);
        for i in 0..nnx {
            let (ri, ci) = cols(i, grid.x.periodic, nx);
            let mut acc = 0.0;
            for &b in &rj[..cj] {
                for &a in &ri[..ci] {
                    acc += nu_cell[b * nx + a];
                }
            }
            out[j * nnx + i] = acc / (ci * cj) as f64;
        }
    }
    out
}

pub fn assemble_viscosity_2d<const N: usize, M: Model2D<N>>(
    state: &HybridField2D<N>,
    activated: &[f64],
    model: &M,
    grid: &Grid2D,
) -> Result<ViscosityField> {
    let nu_cell = state
        .cells
        .iter()
        .zip(activated)
        .map(|(w, a)| {
            let h = directional_length(grid.x.h, grid.y.h, model.velocity(w));
            Ok(0.25 * h * model.max_speed(w)? * a)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ViscosityField {
        z_raw: Vec::new(),
        z_activated: activated.to_vec(),
        nu_node: nodal_from_cells_2d(&nu_cell, grid),
        nu_cell,
    })
}

pub fn viscosity_2d<const N: usize, M: Model2D<N>>(
    history: &mut ResidualHistory,
    state: &HybridField2D<N>,
    model: &M,
    grid: &Grid2D,
    t: f64,
    z0: f64,
    source: Option<&dyn Source2D<N>>,
) -> Result<ViscosityField> {
    let res = cellular_residual_2d(history, state, model, grid, t, source)?;
    let sample = |w: &Vector<N>| -> Result<(EntropyPair, f64)> { Ok((model.entropy(w)?, model.density(w))) };
    let nodes = state.nodal.iter().map(sample).collect::<Result<Vec<_>>>()?;
    let cells = state.cells.iter().map(sample).collect::<Result<Vec<_>>>()?;
    let stats = global_stats(&nodes, &cells);
    let mut vmax = Vec::with_capacity(cells.len());
    let mut h = Vec::with_capacity(cells.len());
    for w in &state.cells {
        vmax.push(model.max_speed(w)?);
        h.push(directional_length(grid.x.h, grid.y.h, model.velocity(w)));
    }
    let z = indicator(&res, &stats, &vmax, &h);
    let sharpened: Vec<f64> = normalize(&z).iter().map(|v| sharpen(*v, z0)).collect();
    let activated = smooth_2d(&sharpened, grid.x.n, grid.y.n, grid.x.periodic, grid.y.periodic);
    let mut field = assemble_viscosity_2d(state, &activated, model, grid)?;
    field.z_raw = z;
    history.push(t, cell_entropy_2d(state, model)?);
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[0.2, 0.5]), vec![0.2, 0.5]);
        assert_eq!(normalize(&[2.0, 4.0]), vec![0.5, 1.0]);
        assert_eq!(normalize(&[5.0]), vec![1.0]);
    }

    #[test]
    fn sharpen_examples() {
        assert_eq!(sharpen(0.0, 0.04), 0.0);
        assert!((sharpen(0.02, 0.04) - 0.5).abs() < 1e-15);
        assert_eq!(sharpen(0.5, 0.04), 1.0);
    }

    #[test]
    fn smoother_passes() {
        let spike = [0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(max_pass_line(&spike, false), vec![0.0, 1.0, 1.0, 1.0, 0.0]);
        let tri = [0.0, 1.0, 0.0];
        assert!((ave_pass_line(&tri, false)[1] - 4.0 / 6.0).abs() < 1e-15);
        assert!((ave_pass_line(&[3.0, 0.0, 0.0], false)[0] - 2.0).abs() < 1e-15);
        let c = vec![0.3; 7];
        assert!(smooth_1d(&c, false).iter().all(|v| (v - 0.3).abs() < 1e-15));
        assert!(smooth_2d(&[0.3; 12], 4, 3, false, true)
            .iter()
            .all(|v| (v - 0.3).abs() < 1e-15));
    }

    #[test]
    fn bdf_uniform_matches_textbook() {
        let mut h = ResidualHistory::new();
        assert_eq!(h.time_derivative(0.0, &[1.0]), vec![0.0]);
        h.push(0.0, vec![0.0]);
        assert_eq!(h.time_derivative(0.5, &[1.0]), vec![2.0]);
        h.push(0.5, vec![0.25]);
        // s = t^2 is differentiated exactly by BDF2.
        let d = h.time_derivative(1.0, &[1.0]);
        assert!((d[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nodal_average() {
        let g = Grid1D::new(0.0, 1.0, 4, false).unwrap();
        let nu = nodal_from_cells_1d(&[0.02, 0.04, 0.0, 0.0], &g);
        assert!((nu[1] - 0.03).abs() < 1e-16);
        assert_eq!(nu[0], 0.02);
        assert_eq!(nu.len(), 5);
    }
}
