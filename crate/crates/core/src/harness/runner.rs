//! Problem dispatch: single runs and convergence studies, with their file outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{RunConfig, Scheme};
use super::norms::{
    euler1d_vars, euler2d_vars, l1_error_1d, l1_error_2d, l1_error_cells_1d, l1_error_cells_2d, observed_orders,
    L1Errors, VarSet,
};
use super::output::{
    cells_csv_1d, fmt_num, viscosity_csv_1d, write_cells_2d, write_fields_1d, write_fields_2d, write_manifest,
    write_text, write_viscosity_2d, RunManifest, MANIFEST_SCHEMA,
};
use crate::linalg::Vector;
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::muscl::{Muscl1D, Muscl2D};
use crate::physics::{Model1D, Model2D};
use crate::problems::reference::{load_or_run_reference, restrict_1d};
use crate::problems::{self, Problem1D, Problem2D, ProblemId};
use crate::solver::{Simulation1D, Simulation2D, SolverSettings};
use crate::viscosity::ViscosityField;
use crate::{Error, Result};

/// Final state of one run on one grid.
pub enum Solution<const N: usize> {
    Hybrid1D(Grid1D, HybridField1D<N>),
    Cells1D(Grid1D, Vec<Vector<N>>),
    Hybrid2D(Grid2D, HybridField2D<N>),
    Cells2D(Grid2D, Vec<Vector<N>>),
}

struct Member<const N: usize> {
    solution: Solution<N>,
    steps: usize,
    t: f64,
    drift: Vec<f64>,
    viscosity: Option<ViscosityField>,
    files: Vec<PathBuf>,
}

fn settings(cfg: &RunConfig) -> SolverSettings {
    SolverSettings {
        alpha_cfl: cfg.alpha_cfl,
        z0: cfg.z0,
        viscosity: cfg.viscosity,
        max_steps: cfg.max_steps,
    }
}

fn cadence_hit(cfg: &RunConfig, step: usize) -> bool {
    cfg.output_every > 0 && step % cfg.output_every == 0
}

fn solve_1d<const N: usize, M: Model1D<N> + Clone>(
    cfg: &RunConfig,
    problem: &Problem1D<N, M>,
    n: usize,
    vars: &VarSet<N>,
    dump_dir: Option<&Path>,
) -> Result<Member<N>> {
    let grid = problem.grid(n)?;
    let init = problem.initial_state(&grid);
    let mut files = Vec::new();
    match cfg.scheme {
        Scheme::Hv => {
            let mut sim = Simulation1D::new(problem.model.clone(), grid, problem.bcs.clone(), settings(cfg), init)?;
            let stats = sim.run_with(problem.t_end, |s| {
                log::debug!("step {} t={} totals={:?}", s.step, s.t, s.totals());
                if let (Some(dir), true) = (dump_dir, cadence_hit(cfg, s.step)) {
                    let p = dir.join(format!("fields_{:06}.csv", s.step));
                    write_fields_1d(&p, &s.grid, &s.state, vars)?;
                    files.push(p);
                }
                Ok(())
            })?;
            Ok(Member {
                solution: Solution::Hybrid1D(grid, sim.state),
                steps: stats.steps,
                t: stats.t,
                drift: stats.conservation_drift,
                viscosity: sim.last_viscosity,
                files,
            })
        }
        Scheme::Muscl => {
            let mut m = Muscl1D::new(
                problem.model.clone(),
                grid,
                problem.bcs.clone(),
                cfg.limiter,
                cfg.flux,
                cfg.alpha_cfl,
                init.cells,
            )?;
            let mass0: Vec<f64> = (0..N).map(|k| m.cells.iter().map(|w| w[k]).sum::<f64>()).collect();
            while m.t < problem.t_end {
                m.step(problem.t_end)?;
                if let (Some(dir), true) = (dump_dir, cadence_hit(cfg, m.step)) {
                    let p = dir.join(format!("fields_{:06}.csv", m.step));
                    write_text(&p, &cells_csv_1d(&grid, &m.cells, vars))?;
                    files.push(p);
                }
            }
            let drift = if grid.periodic {
                cell_drift(&mass0, &m.cells)
            } else {
                Vec::new()
            };
            Ok(Member {
                steps: m.step,
                t: m.t,
                drift,
                viscosity: None,
                solution: Solution::Cells1D(grid, m.cells),
                files,
            })
        }
    }
}

/// Drift of `Σ W̄` relative to the initial `Σ|W̄|` (largest component when zero).
fn cell_drift<const N: usize>(q0: &[f64], cells: &[Vector<N>]) -> Vec<f64> {
    let l1: Vec<f64> = (0..N).map(|k| cells.iter().map(|w| w[k].abs()).sum::<f64>()).collect();
    let fallback = l1.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    (0..N)
        .map(|k| {
            let q: f64 = cells.iter().map(|w| w[k]).sum();
            (q - q0[k]).abs() / if l1[k] > 0.0 { l1[k] } else { fallback }
        })
        .collect()
}

fn solve_2d<const N: usize, M: Model2D<N> + Clone>(
    cfg: &RunConfig,
    problem: &Problem2D<N, M>,
    (nx, ny): (usize, usize),
    vars: &VarSet<N>,
    dump_dir: Option<&Path>,
) -> Result<Member<N>> {
    let grid = problem.grid(nx, ny)?;
    if !grid.aspect_ok() {
        log::warn!("cell aspect ratio {} exceeds the bound", grid.x.h / grid.y.h);
    }
    let init = problem.initial_state(&grid);
    let mut files = Vec::new();
    match cfg.scheme {
        Scheme::Hv => {
            let mut sim = Simulation2D::new(problem.model.clone(), grid, problem.bcs.clone(), settings(cfg), init)?;
            if let Some(src) = &problem.source {
                sim = sim.with_source(src.clone());
            }
            let stats = sim.run_with(problem.t_end, |s| {
                log::debug!("step {} t={} totals={:?}", s.step, s.t, s.totals());
                if let (Some(dir), true) = (dump_dir, cadence_hit(cfg, s.step)) {
                    files.extend(write_fields_2d(
                        dir,
                        &format!("step{:06}_", s.step),
                        &s.grid,
                        &s.state,
                        vars,
                    )?);
                }
                Ok(())
            })?;
            Ok(Member {
                solution: Solution::Hybrid2D(grid, sim.state),
                steps: stats.steps,
                t: stats.t,
                drift: stats.conservation_drift,
                viscosity: sim.last_viscosity,
                files,
            })
        }
        Scheme::Muscl => {
            let mut m = Muscl2D::new(
                problem.model.clone(),
                grid,
                problem.bcs.clone(),
                cfg.limiter,
                cfg.alpha_cfl,
                init.cells,
            )?;
            let mass0: Vec<f64> = (0..N).map(|k| m.cells.iter().map(|w| w[k]).sum::<f64>()).collect();
            while m.t < problem.t_end {
                m.step(problem.t_end)?;
                if let (Some(dir), true) = (dump_dir, cadence_hit(cfg, m.step)) {
                    files.extend(write_cells_2d(
                        dir,
                        &format!("step{:06}_", m.step),
                        &grid,
                        &m.cells,
                        vars,
                    )?);
                }
            }
            let drift = if grid.x.periodic && grid.y.periodic {
                cell_drift(&mass0, &m.cells)
            } else {
                Vec::new()
            };
            Ok(Member {
                steps: m.step,
                t: m.t,
                drift,
                viscosity: None,
                solution: Solution::Cells2D(grid, m.cells),
                files,
            })
        }
    }
}

/// Errors of a 1D member against the exact solution or a restricted reference.
fn errors_1d<const N: usize, M>(
    problem: &Problem1D<N, M>,
    solution: &Solution<N>,
    reference: Option<&HybridField1D<N>>,
    vars: &VarSet<N>,
) -> Result<Option<L1Errors>> {
    let (grid, t) = match solution {
        Solution::Hybrid1D(g, _) | Solution::Cells1D(g, _) => (g, problem.t_end),
        _ => return Err(Error::Shape("2D solution for a 1D problem".into())),
    };
    let target = match (problem.exact_state(grid, t), reference) {
        (Some(e), _) => e,
        (None, Some(r)) => {
            let mut f = restrict_1d(r, grid.n)?;
            // Periodic reference for a walled run: add the closing node.
            if f.periodic && !grid.periodic {
                f.nodal.push(f.nodal[0]);
                f.periodic = false;
            }
            f
        }
        (None, None) => return Ok(None),
    };
    Ok(Some(match solution {
        Solution::Hybrid1D(g, f) => l1_error_1d(f, &target, g, vars)?,
        Solution::Cells1D(g, c) => l1_error_cells_1d(c, &target.cells, g, vars)?,
        _ => unreachable!(),
    }))
}

fn errors_2d<const N: usize, M>(
    problem: &Problem2D<N, M>,
    solution: &Solution<N>,
    vars: &VarSet<N>,
) -> Result<Option<L1Errors>> {
    let grid = match solution {
        Solution::Hybrid2D(g, _) | Solution::Cells2D(g, _) => g,
        _ => return Err(Error::Shape("1D solution for a 2D problem".into())),
    };
    let Some(exact) = problem.exact_state(grid, problem.t_end) else {
        return Ok(None);
    };
    Ok(Some(match solution {
        Solution::Hybrid2D(g, f) => l1_error_2d(f, &exact, g, vars)?,
        Solution::Cells2D(g, c) => l1_error_cells_2d(c, &exact.cells, g, vars)?,
        _ => unreachable!(),
    }))
}

/// Per-problem operations that need the concrete model type.
trait Visitor {
    type Out;
    fn one<const N: usize, M: Model1D<N> + Clone>(
        self,
        problem: Problem1D<N, M>,
        vars: VarSet<N>,
        reference: Option<Problem1D<N, M>>,
    ) -> Result<Self::Out>;
    fn two<const N: usize, M: Model2D<N> + Clone>(self, problem: Problem2D<N, M>, vars: VarSet<N>)
        -> Result<Self::Out>;
}

fn dispatch<V: Visitor>(cfg: &RunConfig, v: V) -> Result<V::Out> {
    use ProblemId::*;
    let t = cfg.t_end;
    fn at<const N: usize, M>(mut p: Problem1D<N, M>, t: f64) -> Problem1D<N, M> {
        p.t_end = t;
        p
    }
    fn at2<const N: usize, M>(mut p: Problem2D<N, M>, t: f64) -> Problem2D<N, M> {
        p.t_end = t;
        p
    }
    match cfg.problem {
        AdvCauchy => v.one(at(problems::adv_cauchy(), t), VarSet::components(), None),
        AdvIbvp => v.one(at(problems::adv_ibvp(), t), VarSet::components(), None),
        AdvGste => v.one(at(problems::adv_gste(), t), VarSet::components(), None),
        // The symmetric data make the periodic and wall solutions identical, so
        // both variants share the periodic reference.
        EulerCollision | EulerCollisionWall => {
            let p = if cfg.problem == EulerCollision {
                problems::euler_collision()
            } else {
                problems::euler_collision_wall()
            };
            let vars = euler1d_vars(p.model);
            v.one(at(p, t), vars, Some(at(problems::euler_collision(), t)))
        }
        Sod => {
            let p = problems::sod();
            let vars = euler1d_vars(p.model);
            v.one(at(p, t), vars, None)
        }
        Kpp => v.two(at2(problems::kpp(), t), VarSet::components()),
        IsentropicVortex => {
            let p = problems::isentropic_vortex();
            let vars = euler2d_vars(p.model);
            v.two(at2(p, t), vars)
        }
        TaylorGreen => {
            let p = problems::taylor_green();
            let vars = euler2d_vars(p.model);
            v.two(at2(p, t), vars)
        }
        ShockBubble => {
            let p = problems::shock_bubble();
            let vars = euler2d_vars(p.model);
            v.two(at2(p, t), vars)
        }
    }
}

fn reference_field<const N: usize, M: Model1D<N> + Clone>(
    cfg: &RunConfig,
    reference: Option<Problem1D<N, M>>,
    exact_known: bool,
) -> Result<Option<HybridField1D<N>>> {
    match (reference, cfg.reference_cells, exact_known) {
        (Some(r), Some(fine), false) => {
            log::info!("reference: {} on {fine} cells", r.id);
            let s = SolverSettings {
                alpha_cfl: crate::time::DEFAULT_ALPHA_CFL,
                ..settings(cfg)
            };
            Ok(Some(load_or_run_reference(&r, fine, s, &cfg.cache_dir)?))
        }
        _ => Ok(None),
    }
}

fn manifest(
    cfg: &RunConfig,
    grid: Vec<usize>,
    steps: usize,
    t: f64,
    drift: Vec<f64>,
    errors: Option<L1Errors>,
    files: &[PathBuf],
) -> RunManifest {
    RunManifest {
        schema: MANIFEST_SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        problem: cfg.problem.to_string(),
        scheme: match cfg.scheme {
            Scheme::Hv => "hv".into(),
            Scheme::Muscl => "muscl".into(),
        },
        grid,
        t_end: cfg.t_end,
        t_final: t,
        steps,
        alpha_cfl: cfg.alpha_cfl,
        z0: cfg.z0,
        viscosity: cfg.viscosity && cfg.scheme == Scheme::Hv,
        conservation_drift: drift,
        errors,
        files: files
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
            .collect(),
    }
}

/// Write the final-state files of one member into `dir`.
fn write_member<const N: usize>(dir: &Path, m: &Member<N>, vars: &VarSet<N>) -> Result<Vec<PathBuf>> {
    let mut files = m.files.clone();
    match &m.solution {
        Solution::Hybrid1D(g, f) => {
            let p = dir.join("fields.csv");
            write_fields_1d(&p, g, f, vars)?;
            files.push(p);
            if let Some(v) = &m.viscosity {
                let p = dir.join("viscosity.csv");
                write_text(&p, &viscosity_csv_1d(g, v))?;
                files.push(p);
            }
        }
        Solution::Cells1D(g, c) => {
            let p = dir.join("fields.csv");
            write_text(&p, &cells_csv_1d(g, c, vars))?;
            files.push(p);
        }
        Solution::Hybrid2D(g, f) => {
            files.extend(write_fields_2d(dir, "", g, f, vars)?);
            if let Some(v) = &m.viscosity {
                files.extend(write_viscosity_2d(dir, "", g, v)?);
            }
        }
        Solution::Cells2D(g, c) => files.extend(write_cells_2d(dir, "", g, c, vars)?),
    }
    Ok(files)
}

struct RunVisitor<'a>(&'a RunConfig);

impl Visitor for RunVisitor<'_> {
    type Out = RunManifest;

    fn one<const N: usize, M: Model1D<N> + Clone>(
        self,
        p: Problem1D<N, M>,
        vars: VarSet<N>,
        r: Option<Problem1D<N, M>>,
    ) -> Result<RunManifest> {
        let cfg = self.0;
        let reference = reference_field(cfg, r, p.exact.is_some())?;
        let m = solve_1d(cfg, &p, cfg.grid[0], &vars, Some(&cfg.output_dir))?;
        let errors = errors_1d(&p, &m.solution, reference.as_ref(), &vars)?;
        let files = write_member(&cfg.output_dir, &m, &vars)?;
        let man = manifest(cfg, cfg.grid.clone(), m.steps, m.t, m.drift.clone(), errors, &files);
        write_manifest(&cfg.output_dir.join("manifest.json"), &man)?;
        Ok(man)
    }

    fn two<const N: usize, M: Model2D<N> + Clone>(self, p: Problem2D<N, M>, vars: VarSet<N>) -> Result<RunManifest> {
        let cfg = self.0;
        let m = solve_2d(cfg, &p, (cfg.grid[0], cfg.grid[1]), &vars, Some(&cfg.output_dir))?;
        let errors = errors_2d(&p, &m.solution, &vars)?;
        let files = write_member(&cfg.output_dir, &m, &vars)?;
        let man = manifest(cfg, cfg.grid.clone(), m.steps, m.t, m.drift.clone(), errors, &files);
        write_manifest(&cfg.output_dir.join("manifest.json"), &man)?;
        Ok(man)
    }
}

/// Single run: field CSVs, viscosity CSV (HV) and `manifest.json` in `cfg.output_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunManifest> {
    cfg.validate()?;
    dispatch(cfg, RunVisitor(cfg))
}

/// One study row; `errors` is `None` when the member failed.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub grid: Vec<usize>,
    pub h: f64,
    pub steps: usize,
    pub status: String,
    pub errors: Option<L1Errors>,
    /// Relative conservation drift per component; empty for non-periodic runs.
    pub drift: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub problem: ProblemId,
    pub scheme: Scheme,
    pub names: Vec<String>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.errors.is_none())
    }

    fn series(&self, name: &str, nodal: bool) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| {
                r.errors
                    .as_ref()
                    .and_then(|e| if nodal { e.nodal_of(name) } else { e.cell_of(name) })
                    .unwrap_or(f64::NAN)
            })
            .collect()
    }

    pub fn cell_errors(&self, name: &str) -> Vec<f64> {
        self.series(name, false)
    }

    pub fn nodal_errors(&self, name: &str) -> Vec<f64> {
        self.series(name, true)
    }

    pub fn h(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.h).collect()
    }

    pub fn cell_orders(&self, name: &str) -> Vec<f64> {
        observed_orders(&self.h(), &self.cell_errors(name))
    }

    pub fn nodal_orders(&self, name: &str) -> Vec<f64> {
        observed_orders(&self.h(), &self.nodal_errors(name))
    }

    /// Columns `n[,ny],h,steps,status`, then per variable `cell_<v>,node_<v>,order_cell_<v>,order_node_<v>`.
    /// Orders sit on the finer row of each pair; the first row leaves them empty.
    pub fn to_csv(&self) -> String {
        let two_d = self.rows.first().is_some_and(|r| r.grid.len() == 2);
        let mut s = String::from(if two_d {
            "nx,ny,h,steps,status"
        } else {
            "n,h,steps,status"
        });
        for v in &self.names {
            let _ = write!(s, ",cell_{v},node_{v},order_cell_{v},order_node_{v}");
        }
        s.push('\n');
        let orders: Vec<(Vec<f64>, Vec<f64>)> = self
            .names
            .iter()
            .map(|v| (self.cell_orders(v), self.nodal_orders(v)))
            .collect();
        let opt = |x: f64| if x.is_nan() { String::new() } else { fmt_num(x) };
        for (k, row) in self.rows.iter().enumerate() {
            let g: Vec<String> = row.grid.iter().map(|n| n.to_string()).collect();
            let _ = write!(s, "{},{},{},{}", g.join(","), fmt_num(row.h), row.steps, row.status);
            for (j, v) in self.names.iter().enumerate() {
                let c = self.cell_errors(v)[k];
                let n = self.nodal_errors(v)[k];
                let (oc, on) = if k == 0 {
                    (f64::NAN, f64::NAN)
                } else {
                    (orders[j].0[k - 1], orders[j].1[k - 1])
                };
                let _ = write!(s, ",{},{},{},{}", opt(c), opt(n), opt(oc), opt(on));
            }
            s.push('\n');
        }
        s
    }
}

fn check_doubling(grids: &[usize]) -> Result<()> {
    if grids.len() < 2 {
        return Err(Error::Config("a convergence study needs at least two grids".into()));
    }
    if grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Config(format!("study grids must double: {grids:?}")));
    }
    Ok(())
}

fn failed_row(grid: Vec<usize>, h: f64, e: &Error) -> Result<ConvergenceRow> {
    match e {
        Error::Divergence { .. } | Error::PhysicsAt { .. } | Error::Physics(_) | Error::Numerical(_) => {
            log::warn!("study member {grid:?} failed: {e}");
            Ok(ConvergenceRow {
                grid,
                h,
                steps: 0,
                status: "diverged".into(),
                errors: None,
                drift: Vec::new(),
            })
        }
        _ => Err(Error::Numerical(format!("study member {grid:?}: {e}"))),
    }
}

struct StudyVisitor<'a>(&'a RunConfig, &'a [usize]);

impl Visitor for StudyVisitor<'_> {
    type Out = ConvergenceReport;

    fn one<const N: usize, M: Model1D<N> + Clone>(
        self,
        p: Problem1D<N, M>,
        vars: VarSet<N>,
        r: Option<Problem1D<N, M>>,
    ) -> Result<ConvergenceReport> {
        let (cfg, grids) = (self.0, self.1);
        let reference = reference_field(cfg, r, p.exact.is_some())?;
        let mut rows = Vec::new();
        for &n in grids {
            let h = (p.domain.1 - p.domain.0) / n as f64;
            let row = match solve_1d(cfg, &p, n, &vars, None) {
                Ok(m) => {
                    let errors = errors_1d(&p, &m.solution, reference.as_ref(), &vars)?;
                    let dir = cfg.output_dir.join(format!("n{n}"));
                    write_member(&dir, &m, &vars)?;
                    ConvergenceRow {
                        grid: vec![n],
                        h,
                        steps: m.steps,
                        status: "ok".into(),
                        errors,
                        drift: m.drift,
                    }
                }
                Err(e) => failed_row(vec![n], h, &e)?,
            };
            log::info!("{} n={n}: {}", p.id, row.status);
            rows.push(row);
        }
        Ok(ConvergenceReport {
            problem: cfg.problem,
            scheme: cfg.scheme,
            names: vars.names.clone(),
            rows,
        })
    }

    fn two<const N: usize, M: Model2D<N> + Clone>(
        self,
        p: Problem2D<N, M>,
        vars: VarSet<N>,
    ) -> Result<ConvergenceReport> {
        let (cfg, grids) = (self.0, self.1);
        let mut rows = Vec::new();
        for &nx in grids {
            let ny = cfg.ny_for(nx);
            let h = ((p.domain.0 .1 - p.domain.0 .0) / nx as f64).min((p.domain.1 .1 - p.domain.1 .0) / ny as f64);
            let row = match solve_2d(cfg, &p, (nx, ny), &vars, None) {
                Ok(m) => ConvergenceRow {
                    grid: vec![nx, ny],
                    h,
                    steps: m.steps,
                    status: "ok".into(),
                    errors: errors_2d(&p, &m.solution, &vars)?,
                    drift: m.drift,
                },
                Err(e) => failed_row(vec![nx, ny], h, &e)?,
            };
            log::info!("{} {nx}x{ny}: {}", p.id, row.status);
            rows.push(row);
        }
        Ok(ConvergenceReport {
            problem: cfg.problem,
            scheme: cfg.scheme,
            names: vars.names.clone(),
            rows,
        })
    }
}

/// Run every grid in `grids` (a doubling sequence), write `convergence.csv`
/// into `cfg.output_dir` and return the report. Failed members stay in the
/// report as `diverged` rows.
pub fn convergence_study(cfg: &RunConfig, grids: &[usize]) -> Result<ConvergenceReport> {
    cfg.validate()?;
    check_doubling(grids)?;
    let report = dispatch(cfg, StudyVisitor(cfg, grids))?;
    write_text(&cfg.output_dir.join("convergence.csv"), &report.to_csv())?;
    Ok(report)
}
