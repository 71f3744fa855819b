use std::sync::Arc;

use super::{relative_drift, RunStats, SolverSettings};
use crate::boundary::Boundaries2D;
use crate::linalg::Vector;
use crate::mesh::{Grid2D, HybridField2D};
use crate::physics::Model2D;
use crate::rhs2d::Rhs2D;
use crate::time::{max_speed_2d, rk4_step, StepController};
use crate::viscosity::{viscosity_2d, ResidualHistory, Source2D, ViscosityField};
use crate::{Error, Result};

/// Weight `K` of the viscous speed `K ν_max / h` added to `v_max` in the 2D
/// step size. Saturated viscosity on its own uses about two thirds of the RK4
/// real-axis interval at `α = 0.6`; on top of advection it does not fit.
pub const VISCOUS_SPEED_FACTOR: f64 = 4.0;

/// A 2D hybrid-variable run in progress.
pub struct Simulation2D<const N: usize, M: Model2D<N>> {
    pub model: M,
    pub grid: Grid2D,
    pub bcs: Boundaries2D<N>,
    pub settings: SolverSettings,
    pub source: Option<Arc<dyn Source2D<N>>>,
    /// Close walls with one-sided formulas rather than mirrored ghosts.
    pub wall_one_sided: bool,
    pub state: HybridField2D<N>,
    pub t: f64,
    pub step: usize,
    pub history: ResidualHistory,
    pub last_viscosity: Option<ViscosityField>,
    initial_totals: Vector<N>,
    initial_l1: Vector<N>,
}

impl<const N: usize, M: Model2D<N>> Simulation2D<N, M> {
    pub fn new(
        model: M,
        grid: Grid2D,
        bcs: Boundaries2D<N>,
        settings: SolverSettings,
        mut state: HybridField2D<N>,
    ) -> Result<Self> {
        settings.validate()?;
        bcs.validate(&grid)?;
        if state.nodal.len() != grid.nnx() * grid.nny() || state.cells.len() != grid.x.n * grid.y.n {
            return Err(Error::Shape("initial state does not match the grid".into()));
        }
        bcs.enforce(&model, &grid, &mut state, 0.0);
        for (k, w) in state.nodal.iter().enumerate() {
            model
                .check(w)
                .map_err(crate::rhs1d::at(|| format!("initial node {k}")))?;
        }
        for (k, w) in state.cells.iter().enumerate() {
            model
                .check(w)
                .map_err(crate::rhs1d::at(|| format!("initial cell {k}")))?;
        }
        let mut sim = Simulation2D {
            model,
            grid,
            bcs,
            settings,
            source: None,
            wall_one_sided: false,
            state,
            t: 0.0,
            step: 0,
            history: ResidualHistory::new(),
            last_viscosity: None,
            initial_totals: [0.0; N],
            initial_l1: [0.0; N],
        };
        sim.initial_totals = sim.totals();
        let area = sim.grid.cell_area();
        for w in &sim.state.cells {
            for k in 0..N {
                sim.initial_l1[k] += area * w[k].abs();
            }
        }
        Ok(sim)
    }

    pub fn with_source(mut self, source: Arc<dyn Source2D<N>>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn totals(&self) -> Vector<N> {
        let mut q = [0.0; N];
        for w in &self.state.cells {
            for k in 0..N {
                q[k] += w[k];
            }
        }
        let area = self.grid.cell_area();
        q.map(|v| v * area)
    }

    pub fn conservation_drift(&self) -> Vec<f64> {
        relative_drift(&self.initial_totals, &self.totals(), &self.initial_l1)
    }

    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let ctrl = StepController::new(self.settings.alpha_cfl, t_end, self.settings.max_steps)?;
        let source = self.source.as_deref();
        let nu = if self.settings.viscosity {
            Some(viscosity_2d(
                &mut self.history,
                &self.state,
                &self.model,
                &self.grid,
                self.t,
                self.settings.z0,
                source,
            )?)
        } else {
            None
        };
        let h = self.grid.h_min();
        let nu_max = nu
            .as_ref()
            .map_or(0.0, |v| v.nu_node.iter().cloned().fold(0.0, f64::max));
        let vmax = max_speed_2d(&self.model, &self.state)? + VISCOUS_SPEED_FACTOR * nu_max / h;
        let dt = ctrl.dt(h, vmax, self.t)?;
        let rhs = Rhs2D {
            model: &self.model,
            grid: &self.grid,
            bcs: &self.bcs,
            source,
            wall_one_sided: self.wall_one_sided,
        };
        let nu_nodes = nu.as_ref().map(|v| v.nu_node.as_slice());
        let (model, grid, bcs) = (&self.model, &self.grid, &self.bcs);
        let next = rk4_step(
            &self.state,
            self.t,
            dt,
            self.step,
            |u, t| rhs.eval(u, t, nu_nodes),
            |u, t| bcs.enforce(model, grid, u, t),
        )?;
        self.state = next;
        self.last_viscosity = nu;
        self.step += 1;
        self.t = if t_end - self.t <= dt { t_end } else { self.t + dt };
        Ok(dt)
    }

    pub fn run(&mut self, t_end: f64) -> Result<RunStats> {
        self.run_with(t_end, |_| Ok(()))
    }

    pub fn run_with(&mut self, t_end: f64, mut observer: impl FnMut(&Self) -> Result<()>) -> Result<RunStats> {
        let start = self.step;
        while self.t < t_end {
            if self.step - start >= self.settings.max_steps {
                return Err(Error::Numerical(format!(
                    "step limit {} reached at t = {}",
                    self.settings.max_steps, self.t
                )));
            }
            self.step(t_end)?;
            observer(self)?;
        }
        let periodic = self.grid.x.periodic && self.grid.y.periodic;
        Ok(RunStats {
            steps: self.step - start,
            t: self.t,
            conservation_drift: if periodic {
                self.conservation_drift()
            } else {
                Vec::new()
            },
        })
    }
}
