//! Analysis exports: characteristic-root sweeps, operator spectra and the
//! simple-wave superconvergence measurement.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::norms::observed_orders;
use super::output::{fmt_num, write_text};
use crate::analysis::{assemble_operator, char_root_sweep, spectrum, AnalysisBc};
use crate::boundary::Boundaries1D;
use crate::mesh::Grid1D;
use crate::physics::Advection1D;
use crate::problems::quadrature;
use crate::solver::{Simulation1D, SolverSettings};
use crate::time::sample_initial_1d;
use crate::Result;

/// `theta,re_mu1,im_mu1,re_mu2,im_mu2` over `n` phases in `[0, 2π)`.
pub fn char_roots_csv(n: usize) -> String {
    let mut s = String::from("theta,re_mu1,im_mu1,re_mu2,im_mu2\n");
    for r in char_root_sweep(n) {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_num(r.theta),
            fmt_num(r.mu1.re),
            fmt_num(r.mu1.im),
            fmt_num(r.mu2.re),
            fmt_num(r.mu2.im)
        );
    }
    s
}

pub fn spectrum_csv(eigs: &[Complex64]) -> String {
    let mut s = String::from("re,im\n");
    for z in eigs {
        let _ = writeln!(s, "{},{}", fmt_num(z.re), fmt_num(z.im));
    }
    s
}

/// Spectra of the assembled operator for every `(n, bc)` pair; writes
/// `spectrum_<bc>_<n>.csv` and returns the largest real part per file.
pub fn export_spectra(dir: &Path, sizes: &[usize]) -> Result<Vec<(PathBuf, f64)>> {
    let mut out = Vec::new();
    for &n in sizes {
        for (bc, tag) in [(AnalysisBc::Periodic, "periodic"), (AnalysisBc::Ibvp, "ibvp")] {
            let eigs = spectrum(&assemble_operator(n, bc)?)?;
            let max_re = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            let path = dir.join(format!("spectrum_{tag}_{n}.csv"));
            write_text(&path, &spectrum_csv(&eigs))?;
            out.push((path, max_re));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperconvergenceRow {
    pub n: usize,
    pub h: f64,
    pub cell_error: f64,
    pub nodal_error: f64,
}

/// Inviscid HV advection of `e^{iκx}` (κ = 2π, unit speed, periodic unit
/// interval) to time `t_end`; the real and imaginary parts run separately and
/// the L1 norm of the complex error is reported. `alpha_cfl` should be small
/// enough that the RK4 error stays below the spatial one.
pub fn superconvergence_study(grids: &[usize], alpha_cfl: f64, t_end: f64) -> Result<Vec<SuperconvergenceRow>> {
    let kappa = 2.0 * PI;
    let parts: [Arc<dyn Fn(f64) -> f64 + Send + Sync>; 2] = [
        Arc::new(move |x| (kappa * x).cos()),
        Arc::new(move |x| (kappa * x).sin()),
    ];
    let mut rows = Vec::new();
    for &n in grids {
        let grid = Grid1D::new(0.0, 1.0, n, true)?;
        let mut node_err = vec![0.0; n];
        let mut cell_err = vec![0.0; n];
        let err2 =
            |node: &mut Vec<f64>, cell: &mut Vec<f64>, f: &Arc<dyn Fn(f64) -> f64 + Send + Sync>| -> Result<()> {
                let mut sim = Simulation1D::new(
                    Advection1D { speed: 1.0 },
                    grid,
                    Boundaries1D::periodic(),
                    SolverSettings::default().inviscid().with_alpha(alpha_cfl),
                    sample_initial_1d(|x| [f(x)], &grid),
                )?;
                sim.run(t_end)?;
                for j in 0..n {
                    let e = sim.state.nodal[j][0] - f(grid.node(j) - t_end);
                    node[j] += e * e;
                    let g = |x: f64| [f(x - t_end)];
                    let exact = quadrature::average(&g, grid.node(j), grid.node(j + 1), &[], 1)[0];
                    let e = sim.state.cells[j][0] - exact;
                    cell[j] += e * e;
                }
                Ok(())
            };
        for f in &parts {
            err2(&mut node_err, &mut cell_err, f)?;
        }
        rows.push(SuperconvergenceRow {
            n,
            h: grid.h,
            cell_error: grid.h * cell_err.iter().map(|e| e.sqrt()).sum::<f64>(),
            nodal_error: grid.h * node_err.iter().map(|e| e.sqrt()).sum::<f64>(),
        });
    }
    Ok(rows)
}

/// `(cell orders, nodal orders)` between consecutive rows.
pub fn superconvergence_orders(rows: &[SuperconvergenceRow]) -> (Vec<f64>, Vec<f64>) {
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let c: Vec<f64> = rows.iter().map(|r| r.cell_error).collect();
    let n: Vec<f64> = rows.iter().map(|r| r.nodal_error).collect();
    (observed_orders(&h, &c), observed_orders(&h, &n))
}

pub fn superconvergence_csv(rows: &[SuperconvergenceRow]) -> String {
    let (oc, on) = superconvergence_orders(rows);
    let mut s = String::from("n,h,cell,node,order_cell,order_node\n");
    for (k, r) in rows.iter().enumerate() {
        let (a, b) = if k == 0 {
            (String::new(), String::new())
        } else {
            (fmt_num(oc[k - 1]), fmt_num(on[k - 1]))
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{a},{b}",
            r.n,
            fmt_num(r.h),
            fmt_num(r.cell_error),
            fmt_num(r.nodal_error)
        );
    }
    s
}
