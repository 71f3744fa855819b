//! Classical RK4, CFL step control and hybrid initial sampling.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::physics::{Model1D, Model2D};

pub const DEFAULT_ALPHA_CFL: f64 = 0.6;
/// Largest Courant number for which the scheme is linearly stable with RK4.
pub const MAX_ALPHA_CFL: f64 = 0.808;

/// States the RK driver can combine linearly.
pub trait OdeState: Clone {
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn all_finite(&self) -> bool;
}

fn axpy_vecs<const N: usize>(y: &mut [Vector<N>], a: f64, x: &[Vector<N>]) {
    for (p, q) in y.iter_mut().zip(x) {
        for k in 0..N {
            p[k] += a * q[k];
        }
    }
}

impl<const N: usize> OdeState for HybridField1D<N> {
    fn axpy(&mut self, a: f64, x: &Self) {
        axpy_vecs(&mut self.nodal, a, &x.nodal);
        axpy_vecs(&mut self.cells, a, &x.cells);
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl<const N: usize> OdeState for HybridField2D<N> {
    fn axpy(&mut self, a: f64, x: &Self) {
        axpy_vecs(&mut self.nodal, a, &x.nodal);
        axpy_vecs(&mut self.cells, a, &x.cells);
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for Vec<f64> {
    fn axpy(&mut self, a: f64, x: &Self) {
        for (p, q) in self.iter_mut().zip(x) {
            *p += a * q;
        }
    }
    fn all_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepController {
    pub alpha_cfl: f64,
    pub t_end: f64,
    pub max_steps: usize,
    pub dt_last: f64,
}

impl StepController {
    pub fn new(alpha_cfl: f64, t_end: f64, max_steps: usize) -> Result<Self> {
        if !(alpha_cfl > 0.0 && alpha_cfl <= MAX_ALPHA_CFL) {
            return Err(Error::config(format!(
                "alpha_cfl = {alpha_cfl} outside (0, {MAX_ALPHA_CFL}]"
            )));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::config(format!("invalid end time {t_end}")));
        }
        Ok(StepController {
            alpha_cfl,
            t_end,
            max_steps,
            dt_last: 0.0,
        })
    }

    /// `alpha h / vmax`, clipped to land exactly on `t_end`.
    pub fn dt(&self, h: f64, vmax: f64, t: f64) -> Result<f64> {
        if !(vmax > 0.0) || !vmax.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot set a CFL step from maximum wave speed {vmax}"
            )));
        }
        let dt = self.alpha_cfl * h / vmax;
        let remaining = self.t_end - t;
        Ok(if dt >= remaining { remaining } else { dt })
    }
}

/// Largest `v_max` over all nodal and cell-average states.
pub fn max_speed_1d<const N: usize, M: Model1D<N>>(model: &M, field: &HybridField1D<N>) -> Result<f64> {
    let mut v = 0.0_f64;
    for w in field.nodal.iter().chain(&field.cells) {
        v = v.max(model.max_speed(w)?);
    }
    Ok(v)
}

pub fn max_speed_2d<const N: usize, M: Model2D<N>>(model: &M, field: &HybridField2D<N>) -> Result<f64> {
    let mut v = 0.0_f64;
    for w in field.nodal.iter().chain(&field.cells) {
        v = v.max(model.max_speed(w)?);
    }
    Ok(v)
}

pub fn compute_dt_1d<const N: usize, M: Model1D<N>>(
    field: &HybridField1D<N>,
    model: &M,
    grid: &Grid1D,
    ctrl: &StepController,
    t: f64,
) -> Result<f64> {
    ctrl.dt(grid.h, max_speed_1d(model, field)?, t)
}

pub fn compute_dt_2d<const N: usize, M: Model2D<N>>(
    field: &HybridField2D<N>,
    model: &M,
    grid: &Grid2D,
    ctrl: &StepController,
    t: f64,
) -> Result<f64> {
    ctrl.dt(grid.h_min(), max_speed_2d(model, field)?, t)
}

fn stage_error(step: usize, stage: usize, e: Error) -> Error {
    match e {
        Error::Physics(p) => Error::Divergence {
            step,
            stage,
            reason: p.to_string(),
        },
        Error::PhysicsAt { location, source } => Error::Divergence {
            step,
            stage,
            reason: format!("{source} at {location}"),
        },
        other => other,
    }
}

/// One classical RK4 step for `U' = L(U, t)`.
///
/// `enforce` applies strong boundary data to each stage state and to the result,
/// at the stage times `t, t+dt/2, t+dt/2, t+dt`. `step` is only used in errors.
pub fn rk4_step<S: OdeState>(
    u: &S,
    t: f64,
    dt: f64,
    step: usize,
    mut rhs: impl FnMut(&S, f64) -> Result<S>,
    mut enforce: impl FnMut(&mut S, f64),
) -> Result<S> {
    let finite = |s: &S, stage: usize| -> Result<()> {
        if s.all_finite() {
            Ok(())
        } else {
            Err(Error::Divergence {
                step,
                stage,
                reason: "non-finite state".into(),
            })
        }
    };
    let half = t + 0.5 * dt;
    let k1 = rhs(u, t).map_err(|e| stage_error(step, 1, e))?;
    let mut u1 = u.clone();
    u1.axpy(0.5 * dt, &k1);
    enforce(&mut u1, half);
    finite(&u1, 1)?;

    let k2 = rhs(&u1, half).map_err(|e| stage_error(step, 2, e))?;
    let mut u2 = u.clone();
    u2.axpy(0.5 * dt, &k2);
    enforce(&mut u2, half);
    finite(&u2, 2)?;

    let k3 = rhs(&u2, half).map_err(|e| stage_error(step, 3, e))?;
    let mut u3 = u.clone();
    u3.axpy(dt, &k3);
    enforce(&mut u3, t + dt);
    finite(&u3, 3)?;

    let k4 = rhs(&u3, t + dt).map_err(|e| stage_error(step, 4, e))?;
    let mut out = u.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    enforce(&mut out, t + dt);
    finite(&out, 4)?;
    Ok(out)
}

/// Two-point Gauss-Legendre abscissae offset for a cell of width `h`.
#[inline]
pub fn gauss2_offset(h: f64) -> f64 {
    h / (2.0 * 3.0_f64.sqrt())
}

/// Nodes sampled exactly, cell averages by two-point Gauss-Legendre.
pub fn sample_initial_1d<const N: usize>(f: impl Fn(f64) -> Vector<N>, grid: &Grid1D) -> HybridField1D<N> {
    let mut field = HybridField1D::zeros(grid);
    for (j, w) in field.nodal.iter_mut().enumerate() {
        *w = f(grid.node(j));
    }
    let d = gauss2_offset(grid.h);
    for (j, w) in field.cells.iter_mut().enumerate() {
        let c = grid.center(j);
        let (a, b) = (f(c - d), f(c + d));
        *w = std::array::from_fn(|k| 0.5 * (a[k] + b[k]));
    }
    field
}

/// 2D analogue of [`sample_initial_1d`] with the 2x2 tensor Gauss rule.
pub fn sample_initial_2d<const N: usize>(f: impl Fn(f64, f64) -> Vector<N>, grid: &Grid2D) -> HybridField2D<N> {
    let mut field = HybridField2D::zeros(grid);
    for j in 0..field.nny {
        for i in 0..field.nnx {
            field.nodal[j * field.nnx + i] = f(grid.x.node(i), grid.y.node(j));
        }
    }
    let (dx, dy) = (gauss2_offset(grid.x.h), gauss2_offset(grid.y.h));
    for j in 0..grid.y.n {
        for i in 0..grid.x.n {
            let (xc, yc) = (grid.x.center(i), grid.y.center(j));
            let mut acc = [0.0; N];
            for (x, y) in [
                (xc - dx, yc - dy),
                (xc + dx, yc - dy),
                (xc - dx, yc + dy),
                (xc + dx, yc + dy),
            ] {
                let v = f(x, y);
                for k in 0..N {
                    acc[k] += 0.25 * v[k];
                }
            }
            field.cells[j * grid.x.n + i] = acc;
        }
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk4_exponential() {
        let u = vec![1.0];
        let out = rk4_step(&u, 0.0, 0.1, 0, |s, _| Ok(vec![-s[0]]), |_, _| {}).unwrap();
        let expect = 1.0 - 0.1 + 0.005 - 0.1_f64.powi(3) / 6.0 + 0.1_f64.powi(4) / 24.0;
        assert!((out[0] - expect).abs() < 1e-15);
        assert!((out[0] - 0.9048375).abs() < 1e-7);
    }

    #[test]
    fn rk4_zero_rhs_is_identity() {
        let u = vec![1.5, -2.0];
        let out = rk4_step(&u, 0.0, 0.3, 0, |s, _| Ok(vec![0.0; s.len()]), |_, _| {}).unwrap();
        assert_eq!(out, u);
    }

    #[test]
    fn rk4_reports_stage_of_blowup() {
        let u = vec![1.0];
        let err = rk4_step(&u, 0.0, 1.0, 7, |_, _| Ok(vec![f64::INFINITY]), |_, _| {}).unwrap_err();
        assert!(matches!(err, Error::Divergence { step: 7, stage: 1, .. }));
    }

    #[test]
    fn controller_bounds_and_clipping() {
        assert!(StepController::new(0.9, 1.0, 10).is_err());
        assert!(StepController::new(0.808, 1.0, 10).is_ok());
        let c = StepController::new(0.6, 1.0, 10).unwrap();
        assert!((c.dt(0.05, 1.0, 0.0).unwrap() - 0.03).abs() < 1e-16);
        assert_eq!(c.dt(0.05, 1.0, 1.0 - 1e-4).unwrap(), 1.0 - (1.0 - 1e-4));
        assert!(c.dt(0.05, 0.0, 0.0).is_err());
    }
}
