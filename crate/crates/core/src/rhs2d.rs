//! Semi-discrete right-hand side of the 2D hybrid-variable scheme on a
//! Cartesian grid.
//!
//! Cell averages are updated from edge-averaged fluxes (4-point quadrature of
//! nodal fluxes along each edge, 3-point next to bounded faces). Nodes use the 1D
//! upwind operators per direction, with the missing edge averages reconstructed
//! from the cell averages across the edge.
//!
//! Wall faces are closed with mirrored ghost layers and the interior formulas;
//! other bounded faces use the one-sided reconstructions and quadratures.

use crate::boundary::{Boundaries2D, BoundaryKind};
use crate::ddo::{
    edge_average_boundary, edge_average_interior, edge_flux_boundary, edge_flux_interior, upwind_left, upwind_right,
    BoundaryEdge,
};
use crate::error::Result;
use crate::linalg::{self, Vector};
use crate::mesh::{Grid2D, HybridField2D};
use crate::physics::{Axis, Model2D};
use crate::rhs1d::at;
use crate::time::gauss2_offset;
use crate::viscosity::Source2D;

const PAD: isize = 2;

/// Hybrid field with two ghost layers around it, indexed by logical position:
/// nodes `-2..=N+2`, cells `-2..=N+1` in each direction.
#[derive(Debug, Clone)]
pub struct Padded2D<const N: usize> {
    nodes: Vec<Vector<N>>,
    cells: Vec<Vector<N>>,
    pub nx: usize,
    pub ny: usize,
    node_w: usize,
    cell_w: usize,
}

impl<const N: usize> Padded2D<N> {
    #[inline(always)]
    pub fn node(&self, i: isize, j: isize) -> &Vector<N> {
        &self.nodes[(j + PAD) as usize * self.node_w + (i + PAD) as usize]
    }

    #[inline(always)]
    pub fn cell(&self, i: isize, j: isize) -> &Vector<N> {
        &self.cells[(j + PAD) as usize * self.cell_w + (i + PAD) as usize]
    }
}

/// Build the ghost layers: x-ghosts on real rows first, then y-ghosts on every
/// column (which fills corners consistently).
pub fn pad_2d<const N: usize, M: Model2D<N>>(
    model: &M,
    grid: &Grid2D,
    bcs: &Boundaries2D<N>,
    state: &HybridField2D<N>,
    t: f64,
) -> Padded2D<N> {
    let (nx, ny) = (grid.x.n as isize, grid.y.n as isize);
    let node_w = (nx + 1 + 2 * PAD) as usize;
    let node_h = (ny + 1 + 2 * PAD) as usize;
    let cell_w = (nx + 2 * PAD) as usize;
    let cell_h = (ny + 2 * PAD) as usize;
    let mut nodes = vec![[0.0; N]; node_w * node_h];
    let mut cells = vec![[0.0; N]; cell_w * cell_h];
    let mx = |w: &Vector<N>| model.mirror(w, Axis::X);
    let my = |w: &Vector<N>| model.mirror(w, Axis::Y);
    let nidx = |i: isize, j: isize| (j + PAD) as usize * node_w + (i + PAD) as usize;
    let cidx = |i: isize, j: isize| (j + PAD) as usize * cell_w + (i + PAD) as usize;

    // x direction on real rows.
    let real_node = |i: usize, j: usize| *state.node(i, j);
    for j in 0..=ny {
        if grid.y.periodic && j == ny {
            continue;
        }
        let ju = j as usize;
        for i in -PAD..=nx + PAD {
            nodes[nidx(i, j)] = if grid.x.periodic {
                real_node(i.rem_euclid(nx) as usize, ju)
            } else if i < 0 {
                bcs.left.ghost_node((-i) as usize, t, |m| real_node(m, ju), mx)
            } else if i > nx {
                bcs.right
                    .ghost_node((i - nx) as usize, t, |m| real_node(nx as usize - m, ju), mx)
            } else {
                real_node(i as usize, ju)
            };
        }
    }
    for j in 0..ny {
        let ju = j as usize;
        let real_cell = |i: usize| *state.cell(i, ju);
        for i in -PAD..nx + PAD {
            cells[cidx(i, j)] = if grid.x.periodic {
                real_cell(i.rem_euclid(nx) as usize)
            } else if i < 0 {
                bcs.left.ghost_cell((-i) as usize, t, real_cell, mx)
            } else if i >= nx {
                bcs.right
                    .ghost_cell((i - nx + 1) as usize, t, |m| real_cell(nx as usize - 1 - m), mx)
            } else {
                real_cell(i as usize)
            };
        }
    }
    // y direction on every padded column.
    for i in -PAD..=nx + PAD {
        for j in (-PAD..0).chain(ny..=ny + PAD) {
            if !grid.y.periodic && j == ny {
                continue;
            }
            nodes[nidx(i, j)] = if grid.y.periodic {
                nodes[nidx(i, j.rem_euclid(ny))]
            } else if j < 0 {
                bcs.bottom
                    .ghost_node((-j) as usize, t, |m| nodes[nidx(i, m as isize)], my)
            } else {
                bcs.top
                    .ghost_node((j - ny) as usize, t, |m| nodes[nidx(i, ny - m as isize)], my)
            };
        }
    }
    for i in -PAD..nx + PAD {
        for j in (-PAD..0).chain(ny..ny + PAD) {
            cells[cidx(i, j)] = if grid.y.periodic {
                cells[cidx(i, j.rem_euclid(ny))]
            } else if j < 0 {
                bcs.bottom
                    .ghost_cell((-j) as usize, t, |m| cells[cidx(i, m as isize)], my)
            } else {
                bcs.top
                    .ghost_cell((j - ny + 1) as usize, t, |m| cells[cidx(i, ny - 1 - m as isize)], my)
            };
        }
    }
    Padded2D {
        nodes,
        cells,
        nx: grid.x.n,
        ny: grid.y.n,
        node_w,
        cell_w,
    }
}

/// How a direction is closed at its two ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Closure {
    lo_ghost: bool,
    hi_ghost: bool,
    n: isize,
}

impl Closure {
    fn new<const N: usize>(lo: &BoundaryKind<N>, hi: &BoundaryKind<N>, n: usize, wall_one_sided: bool) -> Self {
        let ghost = |k: &BoundaryKind<N>| match k {
            BoundaryKind::Periodic => true,
            BoundaryKind::Wall => !wall_one_sided,
            _ => false,
        };
        Closure {
            lo_ghost: ghost(lo),
            hi_ghost: ghost(hi),
            n: n as isize,
        }
    }

    /// Edge average at node position `j` across the direction, from the cell
    /// line `c(k)` (cell `k` spans `[k, k+1]`).
    #[inline(always)]
    fn edge_average(&self, j: isize, c: impl Fn(isize) -> f64) -> f64 {
        let n = self.n;
        if j <= 1 && !self.lo_ghost {
            let which = if j == 0 {
                BoundaryEdge::First
            } else {
                BoundaryEdge::Second
            };
            edge_average_boundary([c(0), c(1), c(2)], which)
        } else if j >= n - 1 && !self.hi_ghost {
            let which = if j == n {
                BoundaryEdge::First
            } else {
                BoundaryEdge::Second
            };
            edge_average_boundary([c(n - 1), c(n - 2), c(n - 3)], which)
        } else {
            edge_average_interior(c(j - 2), c(j - 1), c(j), c(j + 1))
        }
    }

    /// Average over `[j, j+1]` of nodal data `f(k)`.
    #[inline(always)]
    fn edge_flux(&self, j: isize, f: impl Fn(isize) -> f64) -> f64 {
        let n = self.n;
        if j == 0 && !self.lo_ghost {
            edge_flux_boundary(f(0), f(1), f(2))
        } else if j == n - 1 && !self.hi_ghost {
            edge_flux_boundary(f(n), f(n - 1), f(n - 2))
        } else {
            edge_flux_interior(f(j - 1), f(j), f(j + 1), f(j + 2))
        }
    }
}

/// Per-stage right-hand-side evaluator.
pub struct Rhs2D<'a, const N: usize, M: Model2D<N>> {
    pub model: &'a M,
    pub grid: &'a Grid2D,
    pub bcs: &'a Boundaries2D<N>,
    pub source: Option<&'a dyn Source2D<N>>,
    /// Close walls with one-sided formulas instead of mirrored ghosts.
    pub wall_one_sided: bool,
}

/// Reconstructed edge averages for one stage.
struct EdgePlanes<const N: usize> {
    /// Horizontal edges `[x_c, x_{c+1}] × {y_j}`, `c ∈ -1..=nx`, stored rows `j`.
    h: Vec<Vector<N>>,
    /// Vertical edges `{x_i} × [y_r, y_{r+1}]`, stored columns `i`, `r ∈ -1..=ny`.
    v: Vec<Vector<N>>,
    h_w: usize,
    v_w: usize,
}

impl<const N: usize> EdgePlanes<N> {
    #[inline(always)]
    fn h(&self, c: isize, j: usize) -> &Vector<N> {
        &self.h[j * self.h_w + (c + 1) as usize]
    }
    #[inline(always)]
    fn v(&self, i: usize, r: isize) -> &Vector<N> {
        &self.v[(r + 1) as usize * self.v_w + i]
    }
}

impl<'a, const N: usize, M: Model2D<N>> Rhs2D<'a, N, M> {
    fn closures(&self) -> (Closure, Closure) {
        (
            Closure::new(&self.bcs.left, &self.bcs.right, self.grid.x.n, self.wall_one_sided),
            Closure::new(&self.bcs.bottom, &self.bcs.top, self.grid.y.n, self.wall_one_sided),
        )
    }

    fn edge_planes(&self, pad: &Padded2D<N>) -> EdgePlanes<N> {
        let (cx, cy) = self.closures();
        let (nx, ny) = (self.grid.x.n as isize, self.grid.y.n as isize);
        let (nnx, nny) = (self.grid.nnx(), self.grid.nny());
        let h_w = (nx + 2) as usize;
        let mut h = vec![[0.0; N]; h_w * nny];
        for j in 0..nny {
            for c in -1..=nx {
                h[j * h_w + (c + 1) as usize] =
                    std::array::from_fn(|k| cy.edge_average(j as isize, |r| pad.cell(c, r)[k]));
            }
        }
        let v_w = nnx;
        let mut v = vec![[0.0; N]; v_w * (ny + 2) as usize];
        for r in -1..=ny {
            for i in 0..nnx {
                v[(r + 1) as usize * v_w + i] =
                    std::array::from_fn(|k| cx.edge_average(i as isize, |c| pad.cell(c, r)[k]));
            }
        }
        EdgePlanes { h, v, h_w, v_w }
    }

    /// Inviscid cell-average derivative.
    pub fn cells_inviscid(&self, pad: &Padded2D<N>, out: &mut [Vector<N>]) -> Result<()> {
        let (cx, cy) = self.closures();
        let (nx, ny) = (self.grid.x.n, self.grid.y.n);
        let (nxi, nyi) = (nx as isize, ny as isize);
        // Nodal fluxes on columns 0..=nx / rows -1..=ny+1 (F) and the transpose (G).
        let fw = nx + 1;
        let mut f = vec![[0.0; N]; fw * (ny + 3)];
        for j in -1..=nyi + 1 {
            for i in 0..=nxi {
                f[(j + 1) as usize * fw + i as usize] = self
                    .model
                    .flux(pad.node(i, j), Axis::X)
                    .map_err(at(|| format!("node ({i}, {j})")))?;
            }
        }
        let gw = nx + 3;
        let mut g = vec![[0.0; N]; gw * (ny + 1)];
        for j in 0..=nyi {
            for i in -1..=nxi + 1 {
                g[j as usize * gw + (i + 1) as usize] = self
                    .model
                    .flux(pad.node(i, j), Axis::Y)
                    .map_err(at(|| format!("node ({i}, {j})")))?;
            }
        }
        let fx = |i: isize, j: isize| &f[(j + 1) as usize * fw + i as usize];
        let gy = |i: isize, j: isize| &g[j as usize * gw + (i + 1) as usize];
        let (ihx, ihy) = (1.0 / self.grid.x.h, 1.0 / self.grid.y.h);
        // Edge-averaged x-flux through vertical edges of row j, reused along the row.
        let mut jx = vec![[0.0; N]; nx + 1];
        for j in 0..nyi {
            for (i, e) in jx.iter_mut().enumerate() {
                *e = std::array::from_fn(|k| cy.edge_flux(j, |r| fx(i as isize, r)[k]));
            }
            for i in 0..nxi {
                let lo: Vector<N> = std::array::from_fn(|k| cx.edge_flux(i, |c| gy(c, j)[k]));
                let hi: Vector<N> = std::array::from_fn(|k| cx.edge_flux(i, |c| gy(c, j + 1)[k]));
                out[j as usize * nx + i as usize] =
                    std::array::from_fn(|k| -(jx[i as usize + 1][k] - jx[i as usize][k]) * ihx - (hi[k] - lo[k]) * ihy);
            }
        }
        Ok(())
    }

    fn nodes_inviscid(&self, pad: &Padded2D<N>, edges: &EdgePlanes<N>, out: &mut [Vector<N>]) -> Result<()> {
        let (nnx, nny) = (self.grid.nnx(), self.grid.nny());
        let (ihx, ihy) = (1.0 / self.grid.x.h, 1.0 / self.grid.y.h);
        for j in 0..nny {
            for i in 0..nnx {
                let o = &mut out[j * nnx + i];
                if self.bcs.node_pinned(i, j, self.grid) {
                    *o = [0.0; N];
                    continue;
                }
                let (ii, ji) = (i as isize, j as isize);
                let w = pad.node(ii, ji);
                let loc = || format!("node ({i}, {j})");
                let ex = self.model.eigensystem(w, Axis::X).map_err(at(loc))?;
                let dx = upwind_direction(
                    &ex,
                    [
                        pad.node(ii - 1, ji),
                        edges.h(ii - 1, j),
                        w,
                        edges.h(ii, j),
                        pad.node(ii + 1, ji),
                    ],
                    ihx,
                );
                let ey = self.model.eigensystem(w, Axis::Y).map_err(at(loc))?;
                let dy = upwind_direction(
                    &ey,
                    [
                        pad.node(ii, ji - 1),
                        edges.v(i, ji - 1),
                        w,
                        edges.v(i, ji),
                        pad.node(ii, ji + 1),
                    ],
                    ihy,
                );
                *o = std::array::from_fn(|k| -dx[k] - dy[k]);
            }
        }
        Ok(())
    }

    fn viscous(
        &self,
        pad: &Padded2D<N>,
        edges: &EdgePlanes<N>,
        nu_nodes: &[f64],
        cells_out: &mut [Vector<N>],
        nodes_out: &mut [Vector<N>],
    ) -> Result<()> {
        let grid = self.grid;
        let (nx, ny) = (grid.x.n, grid.y.n);
        let (nnx, nny) = (grid.nnx(), grid.nny());
        let (hx, hy) = (grid.x.h, grid.y.h);
        let nu = |i: usize, j: usize| {
            let i = if i == nnx { 0 } else { i };
            let j = if j == nny { 0 } else { j };
            nu_nodes[j * nnx + i]
        };
        // Viscous flux through vertical edges (i, j+1/2).
        let mut fx = vec![[0.0; N]; (nx + 1) * ny];
        for j in 0..ny {
            for i in 0..=nx {
                let nu_e = 0.5 * (nu(i, j) + nu(i, j + 1));
                if nu_e == 0.0 {
                    continue;
                }
                let (ii, ji) = (i as isize, j as isize);
                let (a, b) = (pad.node(ii, ji), pad.node(ii, ji + 1));
                let we = linalg::mid(a, b);
                let m = self
                    .model
                    .viscosity_matrices(&we)
                    .map_err(at(|| format!("edge ({i}, {j}+1/2)")))?;
                let dx: Vector<N> = std::array::from_fn(|k| (pad.cell(ii, ji)[k] - pad.cell(ii - 1, ji)[k]) / hx);
                let dy: Vector<N> = std::array::from_fn(|k| (b[k] - a[k]) / hy);
                let v = linalg::add(&linalg::matvec(&m.a1, &dx), &linalg::matvec(&m.a2, &dy));
                fx[j * (nx + 1) + i] = linalg::scale(nu_e, &v);
            }
        }
        // Viscous flux through horizontal edges (i+1/2, j).
        let mut fy = vec![[0.0; N]; nx * (ny + 1)];
        for j in 0..=ny {
            for i in 0..nx {
                let nu_e = 0.5 * (nu(i, j) + nu(i + 1, j));
                if nu_e == 0.0 {
                    continue;
                }
                let (ii, ji) = (i as isize, j as isize);
                let (a, b) = (pad.node(ii, ji), pad.node(ii + 1, ji));
                let we = linalg::mid(a, b);
                let m = self
                    .model
                    .viscosity_matrices(&we)
                    .map_err(at(|| format!("edge ({i}+1/2, {j})")))?;
                let dx: Vector<N> = std::array::from_fn(|k| (b[k] - a[k]) / hx);
                let dy: Vector<N> = std::array::from_fn(|k| (pad.cell(ii, ji)[k] - pad.cell(ii, ji - 1)[k]) / hy);
                let v = linalg::add(&linalg::matvec(&m.b1, &dx), &linalg::matvec(&m.b2, &dy));
                fy[j * nx + i] = linalg::scale(nu_e, &v);
            }
        }
        for j in 0..ny {
            for i in 0..nx {
                let o = &mut cells_out[j * nx + i];
                let ax = &fx[j * (nx + 1) + i];
                let bx = &fx[j * (nx + 1) + i + 1];
                let ay = &fy[j * nx + i];
                let by = &fy[(j + 1) * nx + i];
                for k in 0..N {
                    o[k] += (bx[k] - ax[k]) / hx + (by[k] - ay[k]) / hy;
                }
            }
        }
        // Frozen-coefficient nodal terms.
        for j in 0..nny {
            for i in 0..nnx {
                let nu_n = nu_nodes[j * nnx + i];
                if nu_n == 0.0 || self.bcs.node_pinned(i, j, grid) {
                    continue;
                }
                let (ii, ji) = (i as isize, j as isize);
                let w = pad.node(ii, ji);
                let m = self
                    .model
                    .viscosity_matrices(w)
                    .map_err(at(|| format!("node ({i}, {j})")))?;
                let (hl, hr) = (edges.h(ii - 1, j), edges.h(ii, j));
                let (vl, vr) = (edges.v(i, ji - 1), edges.v(i, ji));
                let (cmm, cmp, cpm, cpp) = (
                    pad.cell(ii - 1, ji - 1),
                    pad.cell(ii - 1, ji),
                    pad.cell(ii, ji - 1),
                    pad.cell(ii, ji),
                );
                let dx: Vector<N> = std::array::from_fn(|k| (hr[k] - hl[k]) / hx);
                let dy: Vector<N> = std::array::from_fn(|k| (vr[k] - vl[k]) / hy);
                let dxx: Vector<N> = std::array::from_fn(|k| (3.0 * hl[k] - 6.0 * w[k] + 3.0 * hr[k]) / (hx * hx));
                let dyy: Vector<N> = std::array::from_fn(|k| (3.0 * vl[k] - 6.0 * w[k] + 3.0 * vr[k]) / (hy * hy));
                let dxy: Vector<N> = std::array::from_fn(|k| (cmm[k] - cmp[k] - cpm[k] + cpp[k]) / (hx * hy));
                let mut inc = linalg::matvec(&m.a1, &dxx);
                let terms = [
                    linalg::matvec(&linalg::contract(&m.da1, &dx), &dx),
                    linalg::matvec(&m.a2, &dxy),
                    linalg::matvec(&linalg::contract(&m.da2, &dx), &dy),
                    linalg::matvec(&m.b1, &dxy),
                    linalg::matvec(&linalg::contract(&m.db1, &dy), &dx),
                    linalg::matvec(&m.b2, &dyy),
                    linalg::matvec(&linalg::contract(&m.db2, &dy), &dy),
                ];
                for t in &terms {
                    inc = linalg::add(&inc, t);
                }
                let o = &mut nodes_out[j * nnx + i];
                *o = linalg::axpy(o, nu_n, &inc);
            }
        }
        Ok(())
    }

    fn add_source(&self, src: &dyn Source2D<N>, state: &HybridField2D<N>, t: f64, out: &mut HybridField2D<N>) {
        let grid = self.grid;
        let (dx, dy) = (gauss2_offset(grid.x.h), gauss2_offset(grid.y.h));
        for j in 0..grid.y.n {
            for i in 0..grid.x.n {
                let c = j * grid.x.n + i;
                let w = &state.cells[c];
                let (xc, yc) = (grid.x.center(i), grid.y.center(j));
                for (x, y) in [
                    (xc - dx, yc - dy),
                    (xc + dx, yc - dy),
                    (xc - dx, yc + dy),
                    (xc + dx, yc + dy),
                ] {
                    let b = src.eval(x, y, t, w);
                    out.cells[c] = linalg::axpy(&out.cells[c], -0.25, &b);
                }
            }
        }
        for j in 0..state.nny {
            for i in 0..state.nnx {
                if self.bcs.node_pinned(i, j, grid) {
                    continue;
                }
                let k = j * state.nnx + i;
                let b = src.eval(grid.x.node(i), grid.y.node(j), t, &state.nodal[k]);
                out.nodal[k] = linalg::sub(&out.nodal[k], &b);
            }
        }
    }

    /// Full time derivative at time `t` with optional frozen nodal viscosity.
    pub fn eval(&self, state: &HybridField2D<N>, t: f64, nu_nodes: Option<&[f64]>) -> Result<HybridField2D<N>> {
        let pad = pad_2d(self.model, self.grid, self.bcs, state, t);
        let edges = self.edge_planes(&pad);
        let mut out = HybridField2D::zeros(self.grid);
        self.cells_inviscid(&pad, &mut out.cells)?;
        self.nodes_inviscid(&pad, &edges, &mut out.nodal)?;
        if let Some(nu) = nu_nodes {
            self.viscous(&pad, &edges, nu, &mut out.cells, &mut out.nodal)?;
        }
        if let Some(src) = self.source {
            self.add_source(src, state, t, &mut out);
        }
        Ok(out)
    }
}

/// `R Λ D(R^{-1} W)` along one direction from the five samples
/// `[W_prev, avg_left, W, avg_right, W_next]`.
#[inline]
fn upwind_direction<const N: usize>(es: &crate::physics::Eigensystem<N>, s: [&Vector<N>; 5], inv_h: f64) -> Vector<N> {
    let y: [Vector<N>; 5] = s.map(|v| linalg::matvec(&es.left, v));
    let mut d = [0.0; N];
    for k in 0..N {
        let lam = es.eigenvalues[k];
        let dk = if lam > 0.0 {
            upwind_left(y[0][k], y[1][k], y[2][k], y[3][k])
        } else {
            upwind_right(y[1][k], y[2][k], y[3][k], y[4][k])
        };
        d[k] = lam * dk * inv_h;
    }
    linalg::matvec(&es.right, &d)
}

/// Convenience wrapper around [`Rhs2D::eval`].
pub fn rhs_2d<const N: usize, M: Model2D<N>>(
    model: &M,
    grid: &Grid2D,
    bcs: &Boundaries2D<N>,
    state: &HybridField2D<N>,
    t: f64,
    nu_nodes: Option<&[f64]>,
    source: Option<&dyn Source2D<N>>,
) -> Result<HybridField2D<N>> {
    Rhs2D {
        model,
        grid,
        bcs,
        source,
        wall_one_sided: false,
    }
    .eval(state, t, nu_nodes)
}
