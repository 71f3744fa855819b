//! Semi-discrete right-hand side of the 1D hybrid-variable scheme.
//!
//! Cell averages: `W̄' = -(F(W_{j+1}) - F(W_j))/h` plus a conservative viscous flux
//! difference. Nodes: `W' = -R Λ D(R^{-1} W)` with the upwind operator chosen per
//! characteristic, plus the frozen-coefficient viscous term.

use crate::boundary::{Boundaries1D, BoundaryKind};
use crate::ddo::{ddo_boundary_left, ddo_boundary_right, ddo_boundary_second, upwind_left, upwind_right};
use crate::error::{Error, PhysicsError, Result};
use crate::linalg::{self, Vector};
use crate::mesh::{Grid1D, HybridField1D};
use crate::physics::Model1D;

const PAD: usize = 2;

pub(crate) fn at(location: impl FnOnce() -> String) -> impl FnOnce(PhysicsError) -> Error {
    move |source| Error::PhysicsAt {
        location: location(),
        source,
    }
}

/// Hybrid field extended by two ghost layers on each side, indexed by logical
/// position: nodes `-2..=N+2`, cells `-2..=N+1` (cell `j` spans `[x_j, x_{j+1}]`).
#[derive(Debug, Clone)]
pub struct Padded1D<const N: usize> {
    nodes: Vec<Vector<N>>,
    cells: Vec<Vector<N>>,
    pub n: usize,
}

impl<const N: usize> Padded1D<N> {
    #[inline(always)]
    pub fn node(&self, k: isize) -> &Vector<N> {
        &self.nodes[(k + PAD as isize) as usize]
    }

    #[inline(always)]
    pub fn cell(&self, k: isize) -> &Vector<N> {
        &self.cells[(k + PAD as isize) as usize]
    }
}

pub fn pad_1d<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    state: &HybridField1D<N>,
    t: f64,
) -> Padded1D<N> {
    let n = grid.n;
    let ni = n as isize;
    let mirror = |w: &Vector<N>| model.mirror(w);
    let node = |k: isize| -> Vector<N> {
        if grid.periodic {
            state.nodal[k.rem_euclid(ni) as usize]
        } else if k < 0 {
            bcs.left.ghost_node((-k) as usize, t, |m| state.nodal[m], mirror)
        } else if k > ni {
            bcs.right
                .ghost_node((k - ni) as usize, t, |m| state.nodal[n - m], mirror)
        } else {
            state.nodal[k as usize]
        }
    };
    let cell = |k: isize| -> Vector<N> {
        if grid.periodic {
            state.cells[k.rem_euclid(ni) as usize]
        } else if k < 0 {
            bcs.left.ghost_cell((-k) as usize, t, |m| state.cells[m], mirror)
        } else if k >= ni {
            bcs.right
                .ghost_cell((k - ni + 1) as usize, t, |m| state.cells[n - 1 - m], mirror)
        } else {
            state.cells[k as usize]
        }
    };
    let p = PAD as isize;
    Padded1D {
        nodes: (-p..=ni + p).map(node).collect(),
        cells: (-p..ni + p).map(cell).collect(),
        n,
    }
}

/// Which closure applies at a stored node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeRule {
    Interior,
    Pinned,
    OneSidedLeft,
    OneSidedRight,
}

fn node_rule<const N: usize>(grid: &Grid1D, bcs: &Boundaries1D<N>, j: usize) -> NodeRule {
    if grid.periodic {
        return NodeRule::Interior;
    }
    let side = if j == 0 {
        Some((&bcs.left, NodeRule::OneSidedLeft))
    } else if j == grid.n {
        Some((&bcs.right, NodeRule::OneSidedRight))
    } else {
        None
    };
    match side {
        Some((BoundaryKind::Dirichlet(_) | BoundaryKind::Inflow(_), _)) => NodeRule::Pinned,
        Some((BoundaryKind::OneSided, r)) => r,
        _ => NodeRule::Interior,
    }
}

/// Inviscid cell-average derivative.
pub fn rhs_cell_inviscid<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    pad: &Padded1D<N>,
    out: &mut [Vector<N>],
) -> Result<()> {
    let inv_h = 1.0 / grid.h;
    let mut f_left = model.flux(pad.node(0)).map_err(at(|| "node 0".into()))?;
    for (j, o) in out.iter_mut().enumerate() {
        let f_right = model
            .flux(pad.node(j as isize + 1))
            .map_err(at(|| format!("node {}", j + 1)))?;
        *o = std::array::from_fn(|k| -(f_right[k] - f_left[k]) * inv_h);
        f_left = f_right;
    }
    Ok(())
}

/// Inviscid nodal derivative with per-characteristic upwinding.
pub fn rhs_node_inviscid<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    pad: &Padded1D<N>,
    out: &mut [Vector<N>],
) -> Result<()> {
    let inv_h = 1.0 / grid.h;
    for (j, o) in out.iter_mut().enumerate() {
        let rule = node_rule(grid, bcs, j);
        if rule == NodeRule::Pinned {
            *o = [0.0; N];
            continue;
        }
        let ji = j as isize;
        let w = pad.node(ji);
        let es = model.eigensystem(w).map_err(at(|| format!("node {j}")))?;
        let tr = |v: &Vector<N>| linalg::matvec(&es.left, v);
        let y0 = tr(w);
        let mut d = [0.0; N];
        match rule {
            NodeRule::Interior => {
                let ym = tr(pad.node(ji - 1));
                let al = tr(pad.cell(ji - 1));
                let ar = tr(pad.cell(ji));
                let yp = tr(pad.node(ji + 1));
                for k in 0..N {
                    let lam = es.eigenvalues[k];
                    let dk = if lam > 0.0 {
                        upwind_left(ym[k], al[k], y0[k], ar[k])
                    } else {
                        upwind_right(al[k], y0[k], ar[k], yp[k])
                    };
                    d[k] = lam * dk * inv_h;
                }
            }
            NodeRule::OneSidedLeft => {
                let a = tr(pad.cell(0));
                let y1 = tr(pad.node(1));
                for k in 0..N {
                    let lam = es.eigenvalues[k];
                    if lam <= 0.0 {
                        d[k] = lam * ddo_boundary_left(y0[k], a[k], y1[k], grid.h);
                    }
                }
            }
            NodeRule::OneSidedRight => {
                let a = tr(pad.cell(ji - 1));
                let y1 = tr(pad.node(ji - 1));
                for k in 0..N {
                    let lam = es.eigenvalues[k];
                    if lam > 0.0 {
                        d[k] = lam * ddo_boundary_right(y0[k], a[k], y1[k], grid.h);
                    }
                }
            }
            NodeRule::Pinned => unreachable!(),
        }
        let rd = linalg::matvec(&es.right, &d);
        *o = std::array::from_fn(|k| -rd[k]);
    }
    Ok(())
}

/// First and second derivative of the solution at logical node `j` from the
/// adjacent cells, one-sided at data-free ends.
fn central_derivatives<const N: usize>(
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    pad: &Padded1D<N>,
    j: usize,
) -> (Vector<N>, Vector<N>) {
    let h = grid.h;
    let ji = j as isize;
    let one_sided_left = !grid.periodic && j == 0 && matches!(bcs.left, BoundaryKind::OneSided);
    let one_sided_right = !grid.periodic && j == grid.n && matches!(bcs.right, BoundaryKind::OneSided);
    let w = pad.node(ji);
    if one_sided_left {
        let (a, w1) = (pad.cell(0), pad.node(1));
        (
            std::array::from_fn(|k| ddo_boundary_left(w[k], a[k], w1[k], h)),
            std::array::from_fn(|k| ddo_boundary_second(w[k], a[k], w1[k], h)),
        )
    } else if one_sided_right {
        let (a, w1) = (pad.cell(ji - 1), pad.node(ji - 1));
        (
            std::array::from_fn(|k| ddo_boundary_right(w[k], a[k], w1[k], h)),
            std::array::from_fn(|k| ddo_boundary_second(w[k], a[k], w1[k], h)),
        )
    } else {
        let (al, ar) = (pad.cell(ji - 1), pad.cell(ji));
        (
            std::array::from_fn(|k| (ar[k] - al[k]) / h),
            std::array::from_fn(|k| (3.0 * al[k] - 6.0 * w[k] + 3.0 * ar[k]) / (h * h)),
        )
    }
}

/// `nu` per logical node `0..=N` (periodic fields repeat node 0 at the end).
fn nu_logical(grid: &Grid1D, nu_nodes: &[f64], j: usize) -> f64 {
    nu_nodes[grid.node_index(j)]
}

/// Viscous increments for cells and nodes, added into `cells_out`/`nodes_out`.
pub fn rhs_viscous<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    pad: &Padded1D<N>,
    nu_nodes: &[f64],
    cells_out: &mut [Vector<N>],
    nodes_out: &mut [Vector<N>],
) -> Result<()> {
    let n = grid.n;
    // nu_j A_j [D^c W]_j at every logical node.
    let mut vflux = vec![[0.0; N]; n + 1];
    for (j, vf) in vflux.iter_mut().enumerate() {
        let nu = nu_logical(grid, nu_nodes, j);
        if nu == 0.0 {
            continue;
        }
        let w = pad.node(j as isize);
        let (a, t) = model.viscosity_matrix(w).map_err(at(|| format!("node {j}")))?;
        let (d1, d2) = central_derivatives(grid, bcs, pad, j);
        *vf = linalg::scale(nu, &linalg::matvec(&a, &d1));
        // Periodic node N is node 0; its increment is added once.
        let si = grid.node_index(j);
        if si == j && node_rule(grid, bcs, j) != NodeRule::Pinned {
            let td = linalg::contract(&t, &d1);
            let inc = linalg::add(&linalg::matvec(&a, &d2), &linalg::matvec(&td, &d1));
            nodes_out[j] = linalg::axpy(&nodes_out[j], nu, &inc);
        }
    }
    let inv_h = 1.0 / grid.h;
    for (j, o) in cells_out.iter_mut().enumerate() {
        let d = linalg::sub(&vflux[j + 1], &vflux[j]);
        *o = linalg::axpy(o, inv_h, &d);
    }
    Ok(())
}

/// Cell-only part of [`rhs_viscous`].
pub fn rhs_cell_viscous<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    pad: &Padded1D<N>,
    nu_nodes: &[f64],
    out: &mut [Vector<N>],
) -> Result<()> {
    let mut scratch = vec![[0.0; N]; grid.n_nodes()];
    rhs_viscous(model, grid, bcs, pad, nu_nodes, out, &mut scratch)
}

/// Node-only part of [`rhs_viscous`].
pub fn rhs_node_viscous<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    pad: &Padded1D<N>,
    nu_nodes: &[f64],
    out: &mut [Vector<N>],
) -> Result<()> {
    let mut scratch = vec![[0.0; N]; grid.n];
    rhs_viscous(model, grid, bcs, pad, nu_nodes, &mut scratch, out)
}

/// Full time derivative of the hybrid state at time `t`.
pub fn rhs_1d<const N: usize, M: Model1D<N>>(
    model: &M,
    grid: &Grid1D,
    bcs: &Boundaries1D<N>,
    state: &HybridField1D<N>,
    t: f64,
    nu_nodes: Option<&[f64]>,
) -> Result<HybridField1D<N>> {
    let pad = pad_1d(model, grid, bcs, state, t);
    let mut out = HybridField1D::zeros(grid);
    rhs_cell_inviscid(model, grid, &pad, &mut out.cells)?;
    rhs_node_inviscid(model, grid, bcs, &pad, &mut out.nodal)?;
    if let Some(nu) = nu_nodes {
        rhs_viscous(model, grid, bcs, &pad, nu, &mut out.cells, &mut out.nodal)?;
    }
    Ok(out)
}
