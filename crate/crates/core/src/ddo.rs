//! Hybrid-variable discrete differential operators.
//!
//! Kernels take explicit samples so the same code serves the 1D sweeps and both
//! directions of the 2D sweeps. Notation around node `j`: `w_prev = w_{j-1}`,
//! `avg_left = w̄_{j-1/2}`, `w_node = w_j`, `avg_right = w̄_{j+1/2}`,
//! `w_next = w_{j+1}`.

/// The five hybrid samples around a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilSample1D {
    pub w_prev: f64,
    pub avg_left: f64,
    pub w_node: f64,
    pub avg_right: f64,
    pub w_next: f64,
    pub h: f64,
}

/// Left-biased first derivative, third order; used for positive speeds.
#[inline]
pub fn ddo_left(s: &StencilSample1D) -> f64 {
    upwind_left(s.w_prev, s.avg_left, s.w_node, s.avg_right) / s.h
}

/// Right-biased first derivative, third order; used for non-positive speeds.
#[inline]
pub fn ddo_right(s: &StencilSample1D) -> f64 {
    upwind_right(s.avg_left, s.w_node, s.avg_right, s.w_next) / s.h
}

/// `h * D^-`.
#[inline(always)]
pub fn upwind_left(w_prev: f64, avg_left: f64, w_node: f64, avg_right: f64) -> f64 {
    w_prev - 3.5 * avg_left + 2.0 * w_node + 0.5 * avg_right
}

/// `h * D^+`.
#[inline(always)]
pub fn upwind_right(avg_left: f64, w_node: f64, avg_right: f64, w_next: f64) -> f64 {
    -0.5 * avg_left - 2.0 * w_node + 3.5 * avg_right - w_next
}

/// Upwind selection by the sign of the characteristic speed; zero goes right.
#[inline]
pub fn ddo_upwind(speed: f64, s: &StencilSample1D) -> f64 {
    if speed > 0.0 {
        ddo_left(s)
    } else {
        ddo_right(s)
    }
}

#[inline]
pub fn ddo_central_first(avg_left: f64, avg_right: f64, h: f64) -> f64 {
    (avg_right - avg_left) / h
}

#[inline]
pub fn ddo_central_second(avg_left: f64, w_node: f64, avg_right: f64, h: f64) -> f64 {
    (3.0 * avg_left - 6.0 * w_node + 3.0 * avg_right) / (h * h)
}

/// One-sided first derivative at the left end node, second order.
#[inline]
pub fn ddo_boundary_left(w_node0: f64, avg_first_cell: f64, w_node1: f64, h: f64) -> f64 {
    (-4.0 * w_node0 + 6.0 * avg_first_cell - 2.0 * w_node1) / h
}

/// Mirror of [`ddo_boundary_left`] at the right end node.
#[inline]
pub fn ddo_boundary_right(w_last: f64, avg_last_cell: f64, w_before_last: f64, h: f64) -> f64 {
    (4.0 * w_last - 6.0 * avg_last_cell + 2.0 * w_before_last) / h
}

/// One-sided second derivative at an end node from the adjacent cell, exact for
/// quadratics. Symmetric, so it serves both ends.
#[inline]
pub fn ddo_boundary_second(w_end: f64, avg_cell: f64, w_inner: f64, h: f64) -> f64 {
    6.0 * (w_end - 2.0 * avg_cell + w_inner) / (h * h)
}

/// Mixed derivative at a node from the four surrounding cell averages
/// (`mm` = lower-left, `pp` = upper-right).
#[inline]
pub fn ddo_mixed(c_mm: f64, c_mp: f64, c_pm: f64, c_pp: f64, hx: f64, hy: f64) -> f64 {
    (c_mm - c_mp - c_pm + c_pp) / (hx * hy)
}

/// Edge average from the four cell averages straddling it, ordered across the edge:
/// `far_lo, near_lo | near_hi, far_hi`. Fourth order.
#[inline(always)]
pub fn edge_average_interior(far_lo: f64, near_lo: f64, near_hi: f64, far_hi: f64) -> f64 {
    (7.0 / 12.0) * (near_lo + near_hi) - (1.0 / 12.0) * (far_lo + far_hi)
}

/// Which boundary-adjacent edge is reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryEdge {
    /// The edge lying on the boundary.
    First,
    /// The first interior edge.
    Second,
}

pub const EDGE_FIRST_WEIGHTS: [f64; 3] = [11.0 / 6.0, -7.0 / 6.0, 1.0 / 3.0];
pub const EDGE_SECOND_WEIGHTS: [f64; 3] = [1.0 / 3.0, 5.0 / 6.0, -1.0 / 6.0];

/// Third-order edge average from three cell averages stacked inward from the
/// boundary (`cells[0]` touches the boundary). At the far boundary pass the
/// cells in reversed order.
#[inline]
pub fn edge_average_boundary(cells: [f64; 3], which: BoundaryEdge) -> f64 {
    let w = match which {
        BoundaryEdge::First => EDGE_FIRST_WEIGHTS,
        BoundaryEdge::Second => EDGE_SECOND_WEIGHTS,
    };
    w[0] * cells[0] + w[1] * cells[1] + w[2] * cells[2]
}

pub const FLUX_INTERIOR_WEIGHTS: [f64; 4] = [-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0];
pub const FLUX_BOUNDARY_WEIGHTS: [f64; 3] = [5.0 / 12.0, 2.0 / 3.0, -1.0 / 12.0];

/// Average of nodal data over the edge `[s_0, s_1]` from the nodes at
/// `s_{-1}, s_0, s_1, s_2`. Exact for cubics.
#[inline(always)]
pub fn edge_flux_interior(f_m1: f64, f_0: f64, f_1: f64, f_2: f64) -> f64 {
    (13.0 / 24.0) * (f_0 + f_1) - (1.0 / 24.0) * (f_m1 + f_2)
}

/// Average over the boundary edge `[s_0, s_1]` where `s_0` is the boundary node.
/// Exact for quadratics.
#[inline(always)]
pub fn edge_flux_boundary(f_0: f64, f_1: f64, f_2: f64) -> f64 {
    (5.0 / 12.0) * f_0 + (2.0 / 3.0) * f_1 - (1.0 / 12.0) * f_2
}
