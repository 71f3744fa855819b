use super::{relative_drift, RunStats, SolverSettings};
use crate::boundary::Boundaries1D;
use crate::linalg::Vector;
use crate::mesh::{Grid1D, HybridField1D};
use crate::physics::Model1D;
use crate::rhs1d::rhs_1d;
use crate::time::{max_speed_1d, rk4_step, StepController};
use crate::viscosity::{viscosity_1d, ResidualHistory, ViscosityField};
use crate::{Error, Result};

/// A 1D hybrid-variable run in progress.
pub struct Simulation1D<const N: usize, M: Model1D<N>> {
    pub model: M,
    pub grid: Grid1D,
    pub bcs: Boundaries1D<N>,
    pub settings: SolverSettings,
    pub state: HybridField1D<N>,
    pub t: f64,
    pub step: usize,
    pub history: ResidualHistory,
    /// Viscosity used by the most recent step.
    pub last_viscosity: Option<ViscosityField>,
    initial_totals: Vector<N>,
    initial_l1: Vector<N>,
}

impl<const N: usize, M: Model1D<N>> Simulation1D<N, M> {
    pub fn new(
        model: M,
        grid: Grid1D,
        bcs: Boundaries1D<N>,
        settings: SolverSettings,
        mut state: HybridField1D<N>,
    ) -> Result<Self> {
        settings.validate()?;
        bcs.validate(&grid)?;
        if state.nodal.len() != grid.n_nodes() || state.cells.len() != grid.n {
            return Err(Error::Shape("initial state does not match the grid".into()));
        }
        bcs.enforce(&model, &mut state, 0.0);
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
        let mut sim = Simulation1D {
            model,
            grid,
            bcs,
            settings,
            state,
            t: 0.0,
            step: 0,
            history: ResidualHistory::new(),
            last_viscosity: None,
            initial_totals: [0.0; N],
            initial_l1: [0.0; N],
        };
        sim.initial_totals = sim.totals();
        let h = sim.grid.h;
        for w in &sim.state.cells {
            for k in 0..N {
                sim.initial_l1[k] += h * w[k].abs();
            }
        }
        Ok(sim)
    }

    /// `h Σ W̄` per component.
    pub fn totals(&self) -> Vector<N> {
        let mut q = [0.0; N];
        for w in &self.state.cells {
            for k in 0..N {
                q[k] += w[k];
            }
        }
        q.map(|v| v * self.grid.h)
    }

    pub fn conservation_drift(&self) -> Vec<f64> {
        relative_drift(&self.initial_totals, &self.totals(), &self.initial_l1)
    }

    /// Advance one step without passing `t_end`. Returns the step size.
    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let ctrl = StepController::new(self.settings.alpha_cfl, t_end, self.settings.max_steps)?;
        let vmax = max_speed_1d(&self.model, &self.state)?;
        let dt = ctrl.dt(self.grid.h, vmax, self.t)?;
        let nu = if self.settings.viscosity {
            Some(viscosity_1d(
                &mut self.history,
                &self.state,
                &self.model,
                &self.grid,
                self.t,
                self.settings.z0,
            )?)
        } else {
            None
        };
        let (model, grid, bcs) = (&self.model, &self.grid, &self.bcs);
        let nu_nodes = nu.as_ref().map(|v| v.nu_node.as_slice());
        let next = rk4_step(
            &self.state,
            self.t,
            dt,
            self.step,
            |u, t| rhs_1d(model, grid, bcs, u, t, nu_nodes),
            |u, t| bcs.enforce(model, u, t),
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

    /// Run to `t_end`, calling `observer` after every step.
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
        Ok(RunStats {
            steps: self.step - start,
            t: self.t,
            conservation_drift: if self.grid.periodic {
                self.conservation_drift()
            } else {
                Vec::new()
            },
        })
    }
}
