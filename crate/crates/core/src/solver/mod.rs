//! Step drivers: CFL step, viscosity at step start, RK4 with strong boundary data.

mod one_d;
mod two_d;

pub use one_d::Simulation1D;
pub use two_d::Simulation2D;

use crate::time::{DEFAULT_ALPHA_CFL, MAX_ALPHA_CFL};
use crate::viscosity::DEFAULT_Z0;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub alpha_cfl: f64,
    pub z0: f64,
    pub viscosity: bool,
    pub max_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            alpha_cfl: DEFAULT_ALPHA_CFL,
            z0: DEFAULT_Z0,
            viscosity: true,
            max_steps: 10_000_000,
        }
    }
}

impl SolverSettings {
    pub fn inviscid(mut self) -> Self {
        self.viscosity = false;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha_cfl = alpha;
        self
    }

    pub fn with_z0(mut self, z0: f64) -> Self {
        self.z0 = z0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_cfl > 0.0 && self.alpha_cfl <= MAX_ALPHA_CFL) {
            return Err(Error::Config(format!(
                "alpha_cfl = {} outside (0, {MAX_ALPHA_CFL}]",
                self.alpha_cfl
            )));
        }
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::Config(format!("z0 = {} must be positive", self.z0)));
        }
        Ok(())
    }
}

/// Summary of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub t: f64,
    /// Relative drift of each conserved total (periodic runs), else empty.
    pub conservation_drift: Vec<f64>,
}

/// `|Q - Q0| / scale` per component; `scale` is the initial L1 norm of the
/// component, or the largest one when that is zero.
pub(crate) fn relative_drift(q0: &[f64], q: &[f64], l1_0: &[f64]) -> Vec<f64> {
    let fallback = l1_0.iter().cloned().fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    q0.iter()
        .zip(q)
        .zip(l1_0)
        .map(|((a, b), s)| (b - a).abs() / if *s > 0.0 { *s } else { fallback })
        .collect()
}
