//! Exact-moment polynomial oracle shared by the stencil tests and the
//! acceptance run.

#![allow(dead_code)]

use hv_core::ddo::*;

/// `x^d`, with `0^0 = 1`.
pub fn mono(x: f64, d: i32) -> f64 {
    if d == 0 {
        1.0
    } else {
        x.powi(d)
    }
}

pub fn dmono(x: f64, d: i32) -> f64 {
    if d == 0 {
        0.0
    } else {
        d as f64 * mono(x, d - 1)
    }
}

pub fn d2mono(x: f64, d: i32) -> f64 {
    if d < 2 {
        0.0
    } else {
        (d * (d - 1)) as f64 * mono(x, d - 2)
    }
}

/// Exact average of `x^d` over `[a, b]` from the antiderivative.
pub fn avg(d: i32, a: f64, b: f64) -> f64 {
    (b.powi(d + 1) - a.powi(d + 1)) / ((d + 1) as f64 * (b - a))
}

/// Exact hybrid samples of `x^d` around node `x`.
pub fn sample(d: i32, x: f64, h: f64) -> StencilSample1D {
    StencilSample1D {
        w_prev: mono(x - h, d),
        avg_left: avg(d, x - h, x),
        w_node: mono(x, d),
        avg_right: avg(d, x, x + h),
        w_next: mono(x + h, d),
        h,
    }
}

/// `(operator, degree, |error|)` for every operator at every degree it must
/// reproduce exactly, over a few node positions and spacings.
pub fn stencil_errors() -> Vec<(&'static str, i32, f64)> {
    let mut out: Vec<(&'static str, i32, f64)> = Vec::new();
    let mut rec = |name: &'static str, d: i32, e: f64| match out.iter_mut().find(|r| r.0 == name && r.1 == d) {
        Some(r) => r.2 = r.2.max(e),
        None => out.push((name, d, e)),
    };
    for &x in &[0.0, 0.3, -0.7] {
        for &h in &[0.5, 0.25, 0.1] {
            for d in 0..=3 {
                let s = sample(d, x, h);
                rec("ddo_left", d, (ddo_left(&s) - dmono(x, d)).abs());
                rec("ddo_right", d, (ddo_right(&s) - dmono(x, d)).abs());
                // Edge at x between cells [x-2h, x-h], [x-h, x] | [x, x+h], [x+h, x+2h].
                let e = edge_average_interior(
                    avg(d, x - 2.0 * h, x - h),
                    s.avg_left,
                    s.avg_right,
                    avg(d, x + h, x + 2.0 * h),
                );
                rec("edge_average_interior", d, (e - mono(x, d)).abs());
                // Nodes x-h, x | x+h, x+2h; the edge is [x, x+h].
                let f = edge_flux_interior(mono(x - h, d), mono(x, d), mono(x + h, d), mono(x + 2.0 * h, d));
                rec("edge_flux_interior", d, (f - avg(d, x, x + h)).abs());
            }
            for d in 0..=2 {
                let s = sample(d, x, h);
                rec(
                    "ddo_central_first",
                    d,
                    (ddo_central_first(s.avg_left, s.avg_right, h) - dmono(x, d)).abs(),
                );
                rec(
                    "ddo_central_second",
                    d,
                    (ddo_central_second(s.avg_left, s.w_node, s.avg_right, h) - d2mono(x, d)).abs(),
                );
                let bl = ddo_boundary_left(mono(x, d), s.avg_right, mono(x + h, d), h);
                rec("ddo_boundary_left", d, (bl - dmono(x, d)).abs());
                let br = ddo_boundary_right(mono(x, d), s.avg_left, mono(x - h, d), h);
                rec("ddo_boundary_right", d, (br - dmono(x, d)).abs());
                let b2 = ddo_boundary_second(mono(x, d), s.avg_right, mono(x + h, d), h);
                rec("ddo_boundary_second", d, (b2 - d2mono(x, d)).abs());
                // Boundary at x, cells stacked to the right.
                let cells = [
                    avg(d, x, x + h),
                    avg(d, x + h, x + 2.0 * h),
                    avg(d, x + 2.0 * h, x + 3.0 * h),
                ];
                rec(
                    "edge_average_boundary/first",
                    d,
                    (edge_average_boundary(cells, BoundaryEdge::First) - mono(x, d)).abs(),
                );
                rec(
                    "edge_average_boundary/second",
                    d,
                    (edge_average_boundary(cells, BoundaryEdge::Second) - mono(x + h, d)).abs(),
                );
                let fb = edge_flux_boundary(mono(x, d), mono(x + h, d), mono(x + 2.0 * h, d));
                rec("edge_flux_boundary", d, (fb - avg(d, x, x + h)).abs());
                for b in 0..=2 {
                    let hy = 0.7 * h;
                    let y = 0.2;
                    let c = |x0: f64, x1: f64, y0: f64, y1: f64| avg(d, x0, x1) * avg(b, y0, y1);
                    let m = ddo_mixed(
                        c(x - h, x, y - hy, y),
                        c(x - h, x, y, y + hy),
                        c(x, x + h, y - hy, y),
                        c(x, x + h, y, y + hy),
                        h,
                        hy,
                    );
                    rec("ddo_mixed", d * 3 + b, (m - dmono(x, d) * dmono(y, b)).abs());
                }
            }
        }
    }
    out
}

pub const STENCIL_TOL: f64 = 1e-12;
