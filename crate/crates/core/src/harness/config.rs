//! Run configuration: TOML text with defaults for every optional key.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::muscl::{Limiter, NumericalFlux, MUSCL_DEFAULT_CFL};
use crate::problems::{problem_info, ProblemId};
use crate::time::{DEFAULT_ALPHA_CFL, MAX_ALPHA_CFL};
use crate::viscosity::DEFAULT_Z0;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Hv,
    Muscl,
}

/// Keys as they appear in the file; everything but `problem` is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: Option<String>,
    scheme: Option<Scheme>,
    n: Option<usize>,
    nx: Option<usize>,
    ny: Option<usize>,
    grids: Option<Vec<usize>>,
    alpha_cfl: Option<f64>,
    z0: Option<f64>,
    viscosity: Option<bool>,
    limiter: Option<Limiter>,
    flux: Option<NumericalFlux>,
    t_end: Option<f64>,
    output_dir: Option<PathBuf>,
    output_every: Option<usize>,
    reference_cells: Option<usize>,
    cache_dir: Option<PathBuf>,
    max_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub scheme: Scheme,
    /// Cells per direction: `[n]` in 1D, `[nx, ny]` in 2D.
    pub grid: Vec<usize>,
    /// Cells in the x direction for convergence studies (y follows the
    /// problem's aspect ratio).
    pub grids: Vec<usize>,
    pub alpha_cfl: f64,
    pub z0: f64,
    pub viscosity: bool,
    pub limiter: Limiter,
    pub flux: NumericalFlux,
    pub t_end: f64,
    pub output_dir: PathBuf,
    /// Steps between intermediate field dumps; 0 writes the final state only.
    pub output_every: usize,
    pub reference_cells: Option<usize>,
    pub cache_dir: PathBuf,
    pub max_steps: usize,
}

impl RunConfig {
    /// Catalog defaults for `problem`.
    pub fn defaults(problem: ProblemId) -> Self {
        let info = problem_info(problem);
        let limiter = if problem == ProblemId::Kpp {
            Limiter::Superbee
        } else {
            Limiter::VanAlbada
        };
        let flux = if problem == ProblemId::Sod {
            NumericalFlux::Roe
        } else {
            NumericalFlux::Rusanov
        };
        RunConfig {
            problem,
            scheme: Scheme::Hv,
            grid: info.default_grids[0].clone(),
            grids: info.default_grids.iter().map(|g| g[0]).collect(),
            alpha_cfl: DEFAULT_ALPHA_CFL,
            z0: DEFAULT_Z0,
            viscosity: true,
            limiter,
            flux,
            t_end: info.t_end,
            output_dir: PathBuf::from("out").join(problem.as_str()),
            output_every: 0,
            reference_cells: info.reference_cells,
            cache_dir: PathBuf::from("out").join("cache"),
            max_steps: 10_000_000,
        }
    }

    /// `ny` for a study member with `nx` cells in x.
    pub fn ny_for(&self, nx: usize) -> usize {
        if self.grid.len() == 2 {
            (nx * self.grid[1] + self.grid[0] / 2) / self.grid[0]
        } else {
            nx
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_cfl > 0.0 && self.alpha_cfl <= MAX_ALPHA_CFL) {
            return Err(Error::Config(format!(
                "alpha_cfl = {} must lie in (0, {MAX_ALPHA_CFL}]",
                self.alpha_cfl
            )));
        }
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::Config(format!("z0 = {} must be positive", self.z0)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end = {} must be positive", self.t_end)));
        }
        let dim = self.problem.dimension();
        if self.grid.len() != dim || self.grid.iter().any(|&n| n < 4) {
            return Err(Error::Config(format!(
                "{} needs {dim} grid size(s) of at least 4 cells, got {:?}",
                self.problem, self.grid
            )));
        }
        if self.grids.iter().any(|&n| n < 4) {
            return Err(Error::Config("study grids need at least 4 cells".into()));
        }
        if self.scheme == Scheme::Muscl && self.flux == NumericalFlux::Roe && dim == 2 {
            return Err(Error::Config("the 2D baseline supports the rusanov flux only".into()));
        }
        Ok(())
    }
}

/// Parse TOML text. `problem` may come from the text or from `problem_override`.
pub fn parse_config(text: &str, problem_override: Option<ProblemId>) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    let problem = match (problem_override, raw.problem.as_deref()) {
        (Some(p), _) => p,
        (None, Some(s)) => s.parse()?,
        (None, None) => return Err(Error::Config("missing key 'problem'".into())),
    };
    let mut c = RunConfig::defaults(problem);
    if let Some(s) = raw.scheme {
        c.scheme = s;
        if s == Scheme::Muscl && raw.alpha_cfl.is_none() {
            c.alpha_cfl = MUSCL_DEFAULT_CFL;
        }
    }
    match (problem.dimension(), raw.n, raw.nx, raw.ny) {
        (1, Some(n), None, None) => c.grid = vec![n],
        (2, Some(n), None, None) => c.grid = vec![n, c.ny_for(n)],
        (2, None, Some(nx), ny) => {
            let ny = ny.unwrap_or_else(|| c.ny_for(nx));
            c.grid = vec![nx, ny];
        }
        (_, None, None, None) => {}
        (d, ..) => {
            return Err(Error::Config(format!(
                "grid keys do not fit a {d}D problem (use n{})",
                if d == 2 { " or nx/ny" } else { "" }
            )))
        }
    }
    if let Some(g) = raw.grids {
        c.grids = g;
    }
    if let Some(a) = raw.alpha_cfl {
        c.alpha_cfl = a;
    }
    if let Some(z) = raw.z0 {
        c.z0 = z;
    }
    if let Some(v) = raw.viscosity {
        c.viscosity = v;
    }
    if let Some(l) = raw.limiter {
        c.limiter = l;
    }
    if let Some(f) = raw.flux {
        c.flux = f;
    }
    if let Some(t) = raw.t_end {
        c.t_end = t;
    }
    if let Some(d) = raw.output_dir {
        c.output_dir = d;
    }
    if let Some(k) = raw.output_every {
        c.output_every = k;
    }
    if let Some(r) = raw.reference_cells {
        c.reference_cells = Some(r);
    }
    if let Some(d) = raw.cache_dir {
        c.cache_dir = d;
    }
    if let Some(m) = raw.max_steps {
        c.max_steps = m;
    }
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_for_sod() {
        let c = parse_config("problem = \"sod\"", None).unwrap();
        assert_eq!(c.alpha_cfl, 0.6);
        assert_eq!(c.z0, 0.04);
        assert_eq!(c.scheme, Scheme::Hv);
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = parse_config("problem = \"sod\"\nbogus = 1\n", None).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 2"), "{msg}");
    }
}
