//! Second-order MUSCL finite-volume baseline (cell averages only) with Heun
//! time stepping, used for the comparison runs.
//!
//! Reconstruction is component-wise on conserved variables. If a limited face
//! state is unphysical the cell falls back to a zero slope.

use serde::{Deserialize, Serialize};

use crate::boundary::{Boundaries1D, Boundaries2D, BoundaryKind};
use crate::error::{Error, PhysicsError, Result};
use crate::linalg::{self, Vector};
use crate::mesh::{Grid1D, Grid2D};
use crate::physics::{Axis, Model1D, Model2D};
use crate::rhs1d::at;

/// Default Courant number for the baseline (TVD with superbee needs ≤ 1/2).
pub const MUSCL_DEFAULT_CFL: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limiter {
    VanAlbada,
    Superbee,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumericalFlux {
    Rusanov,
    Roe,
}

/// Limited slope (per cell width) from the backward and forward differences.
#[inline]
pub fn limited_slope(limiter: Limiter, dm: f64, dp: f64) -> f64 {
    if dm * dp <= 0.0 {
        return 0.0;
    }
    match limiter {
        // φ(r)·Δm with φ(r) = (r² + r)/(r² + 1), r = Δp/Δm.
        Limiter::VanAlbada => dm * dp * (dm + dp) / (dm * dm + dp * dp),
        Limiter::Superbee => {
            let r = dp / dm;
            let phi = (2.0 * r).min(1.0).max(r.min(2.0)).max(0.0);
            phi * dm
        }
    }
}

/// Face values `(left face, right face)` of the middle cell of a triplet.
pub fn muscl_reconstruct<const N: usize>(
    limiter: Limiter,
    prev: &Vector<N>,
    mid: &Vector<N>,
    next: &Vector<N>,
) -> (Vector<N>, Vector<N>) {
    let slope: Vector<N> = std::array::from_fn(|k| limited_slope(limiter, mid[k] - prev[k], next[k] - mid[k]));
    (
        std::array::from_fn(|k| mid[k] - 0.5 * slope[k]),
        std::array::from_fn(|k| mid[k] + 0.5 * slope[k]),
    )
}

/// Reconstruction with the physical-state fallback.
fn reconstruct_checked<const N: usize>(
    limiter: Limiter,
    check: impl Fn(&Vector<N>) -> std::result::Result<(), PhysicsError>,
    prev: &Vector<N>,
    mid: &Vector<N>,
    next: &Vector<N>,
) -> (Vector<N>, Vector<N>) {
    let (l, r) = muscl_reconstruct(limiter, prev, mid, next);
    if check(&l).is_ok() && check(&r).is_ok() {
        (l, r)
    } else {
        (*mid, *mid)
    }
}

/// `(F(L) + F(R))/2 − (a/2)(R − L)` with `a` the larger of the two speeds.
pub fn rusanov_flux<const N: usize>(
    flux: impl Fn(&Vector<N>) -> std::result::Result<Vector<N>, PhysicsError>,
    speed: impl Fn(&Vector<N>) -> std::result::Result<f64, PhysicsError>,
    l: &Vector<N>,
    r: &Vector<N>,
) -> std::result::Result<Vector<N>, PhysicsError> {
    let (fl, fr) = (flux(l)?, flux(r)?);
    let a = speed(l)?.max(speed(r)?);
    Ok(std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * a * (r[k] - l[k])))
}

fn pad_cells_1d<const N: usize, M: Model1D<N>>(
    model: &M,
    bcs: &Boundaries1D<N>,
    cells: &[Vector<N>],
    periodic: bool,
    t: f64,
) -> Vec<Vector<N>> {
    let n = cells.len();
    let mut out = Vec::with_capacity(n + 4);
    let mirror = |w: &Vector<N>| model.mirror(w);
    for k in [2usize, 1] {
        out.push(if periodic {
            cells[n - k]
        } else {
            bcs.left.ghost_cell(k, t, |m| cells[m], mirror)
        });
    }
    out.extend_from_slice(cells);
    for k in [1usize, 2] {
        out.push(if periodic {
            cells[k - 1]
        } else {
            bcs.right.ghost_cell(k, t, |m| cells[n - 1 - m], mirror)
        });
    }
    out
}

/// One-dimensional MUSCL solver state.
pub struct Muscl1D<const N: usize, M: Model1D<N>> {
    pub model: M,
    pub grid: Grid1D,
    pub bcs: Boundaries1D<N>,
    pub limiter: Limiter,
    pub flux: NumericalFlux,
    pub alpha_cfl: f64,
    pub cells: Vec<Vector<N>>,
    pub t: f64,
    pub step: usize,
}

impl<const N: usize, M: Model1D<N>> Muscl1D<N, M> {
    pub fn new(
        model: M,
        grid: Grid1D,
        bcs: Boundaries1D<N>,
        limiter: Limiter,
        flux: NumericalFlux,
        alpha_cfl: f64,
        cells: Vec<Vector<N>>,
    ) -> Result<Self> {
        bcs.validate(&grid)?;
        if cells.len() != grid.n {
            return Err(Error::Shape("initial cells do not match the grid".into()));
        }
        if !(alpha_cfl > 0.0 && alpha_cfl <= 1.0) {
            return Err(Error::Config(format!("alpha_cfl = {alpha_cfl} outside (0, 1]")));
        }
        Ok(Muscl1D {
            model,
            grid,
            bcs,
            limiter,
            flux,
            alpha_cfl,
            cells,
            t: 0.0,
            step: 0,
        })
    }

    fn face_flux(&self, l: &Vector<N>, r: &Vector<N>) -> Result<Vector<N>> {
        match self.flux {
            NumericalFlux::Rusanov => Ok(rusanov_flux(|w| self.model.flux(w), |w| self.model.max_speed(w), l, r)?),
            NumericalFlux::Roe => self.model.roe_flux(l, r),
        }
    }

    /// `dU/dt` for the cell averages.
    pub fn rhs(&self, cells: &[Vector<N>], t: f64) -> Result<Vec<Vector<N>>> {
        let n = cells.len();
        let pad = pad_cells_1d(&self.model, &self.bcs, cells, self.grid.periodic, t);
        // Face states of padded cells 1..=n+2 (logical -1..=n).
        let faces: Vec<(Vector<N>, Vector<N>)> = (1..n + 3)
            .map(|p| reconstruct_checked(self.limiter, |w| self.model.check(w), &pad[p - 1], &pad[p], &pad[p + 1]))
            .collect();
        // Flux at interface j-1/2 between logical cells j-1 and j, j = 0..=n.
        let mut f = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let l = faces[j].1;
            let r = faces[j + 1].0;
            f.push(self.face_flux(&l, &r).map_err(|e| match e {
                Error::Physics(p) => Error::PhysicsAt {
                    location: format!("interface {j}"),
                    source: p,
                },
                other => other,
            })?);
        }
        let inv_h = 1.0 / self.grid.h;
        Ok((0..n)
            .map(|j| std::array::from_fn(|k| -(f[j + 1][k] - f[j][k]) * inv_h))
            .collect())
    }

    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let mut vmax = 0.0_f64;
        for w in &self.cells {
            vmax = vmax.max(self.model.max_speed(w).map_err(at(|| "cell".to_string()))?);
        }
        if vmax <= 0.0 {
            return Err(Error::Numerical("zero wave speed, cannot set a CFL step".into()));
        }
        let dt = (self.alpha_cfl * self.grid.h / vmax).min(t_end - self.t);
        let k1 = self.rhs(&self.cells, self.t)?;
        let u1: Vec<Vector<N>> = self
            .cells
            .iter()
            .zip(&k1)
            .map(|(u, k)| linalg::axpy(u, dt, k))
            .collect();
        check_finite(&u1, self.step, 1)?;
        let k2 = self.rhs(&u1, self.t + dt)?;
        let next: Vec<Vector<N>> = self
            .cells
            .iter()
            .zip(k1.iter().zip(&k2))
            .map(|(u, (a, b))| std::array::from_fn(|k| u[k] + 0.5 * dt * (a[k] + b[k])))
            .collect();
        check_finite(&next, self.step, 2)?;
        self.cells = next;
        self.step += 1;
        self.t = if t_end - self.t <= dt { t_end } else { self.t + dt };
        Ok(dt)
    }

    pub fn run(&mut self, t_end: f64) -> Result<usize> {
        let start = self.step;
        while self.t < t_end {
            self.step(t_end)?;
        }
        Ok(self.step - start)
    }
}

fn check_finite<const N: usize>(cells: &[Vector<N>], step: usize, stage: usize) -> Result<()> {
    if cells.iter().all(linalg::is_finite) {
        Ok(())
    } else {
        Err(Error::Divergence {
            step,
            stage,
            reason: "non-finite cell average".into(),
        })
    }
}

/// Two-dimensional dimension-by-dimension MUSCL (Rusanov flux only).
pub struct Muscl2D<const N: usize, M: Model2D<N>> {
    pub model: M,
    pub grid: Grid2D,
    pub bcs: Boundaries2D<N>,
    pub limiter: Limiter,
    pub alpha_cfl: f64,
    /// Row-major cell averages, `j * nx + i`.
    pub cells: Vec<Vector<N>>,
    pub t: f64,
    pub step: usize,
}

impl<const N: usize, M: Model2D<N>> Muscl2D<N, M> {
    pub fn new(
        model: M,
        grid: Grid2D,
        bcs: Boundaries2D<N>,
        limiter: Limiter,
        alpha_cfl: f64,
        cells: Vec<Vector<N>>,
    ) -> Result<Self> {
        bcs.validate(&grid)?;
        if cells.len() != grid.x.n * grid.y.n {
            return Err(Error::Shape("initial cells do not match the grid".into()));
        }
        if !(alpha_cfl > 0.0 && alpha_cfl <= 1.0) {
            return Err(Error::Config(format!("alpha_cfl = {alpha_cfl} outside (0, 1]")));
        }
        Ok(Muscl2D {
            model,
            grid,
            bcs,
            limiter,
            alpha_cfl,
            cells,
            t: 0.0,
            step: 0,
        })
    }

    /// Cells with two ghost layers; width `nx + 4`.
    fn pad(&self, cells: &[Vector<N>], t: f64) -> Vec<Vector<N>> {
        let (nx, ny) = (self.grid.x.n as isize, self.grid.y.n as isize);
        let w = (nx + 4) as usize;
        let mut out = vec![[0.0; N]; w * (ny + 4) as usize];
        let idx = |i: isize, j: isize| (j + 2) as usize * w + (i + 2) as usize;
        let mx = |s: &Vector<N>| self.model.mirror(s, Axis::X);
        let my = |s: &Vector<N>| self.model.mirror(s, Axis::Y);
        let ghost = |kind: &BoundaryKind<N>,
                     k: usize,
                     inner: &dyn Fn(usize) -> Vector<N>,
                     m: &dyn Fn(&Vector<N>) -> Vector<N>| { kind.ghost_cell(k, t, inner, m) };
        for j in 0..ny {
            let row = |i: usize| cells[j as usize * nx as usize + i];
            for i in -2..nx + 2 {
                out[idx(i, j)] = if self.grid.x.periodic {
                    row(i.rem_euclid(nx) as usize)
                } else if i < 0 {
                    ghost(&self.bcs.left, (-i) as usize, &|m| row(m), &mx)
                } else if i >= nx {
                    ghost(
                        &self.bcs.right,
                        (i - nx + 1) as usize,
                        &|m| row(nx as usize - 1 - m),
                        &mx,
                    )
                } else {
                    row(i as usize)
                };
            }
        }
        for i in -2..nx + 2 {
            for j in (-2..0).chain(ny..ny + 2) {
                out[idx(i, j)] = if self.grid.y.periodic {
                    out[idx(i, j.rem_euclid(ny))]
                } else if j < 0 {
                    let col = |m: usize| out[idx(i, m as isize)];
                    ghost(&self.bcs.bottom, (-j) as usize, &col, &my)
                } else {
                    let col = |m: usize| out[idx(i, ny - 1 - m as isize)];
                    ghost(&self.bcs.top, (j - ny + 1) as usize, &col, &my)
                };
            }
        }
        out
    }

    pub fn rhs(&self, cells: &[Vector<N>], t: f64) -> Result<Vec<Vector<N>>> {
        let (nx, ny) = (self.grid.x.n, self.grid.y.n);
        let pad = self.pad(cells, t);
        let w = nx + 4;
        let p = |i: isize, j: isize| &pad[(j + 2) as usize * w + (i + 2) as usize];
        let check = |s: &Vector<N>| self.model.check(s);
        let mut out = vec![[0.0; N]; nx * ny];
        let (ihx, ihy) = (1.0 / self.grid.x.h, 1.0 / self.grid.y.h);
        let face = |axis: Axis, l: &Vector<N>, r: &Vector<N>, loc: &dyn Fn() -> String| -> Result<Vector<N>> {
            rusanov_flux(|s| self.model.flux(s, axis), |s| self.model.axis_speed(s, axis), l, r).map_err(at(loc))
        };
        for j in 0..ny as isize {
            let faces: Vec<(Vector<N>, Vector<N>)> = (-1..=nx as isize)
                .map(|i| reconstruct_checked(self.limiter, check, p(i - 1, j), p(i, j), p(i + 1, j)))
                .collect();
            for i in 0..=nx {
                let f = face(Axis::X, &faces[i].1, &faces[i + 1].0, &|| format!("x-face ({i}, {j})"))?;
                if i < nx {
                    let o = &mut out[j as usize * nx + i];
                    *o = linalg::axpy(o, ihx, &f);
                }
                if i > 0 {
                    let o = &mut out[j as usize * nx + i - 1];
                    *o = linalg::axpy(o, -ihx, &f);
                }
            }
        }
        for i in 0..nx as isize {
            let faces: Vec<(Vector<N>, Vector<N>)> = (-1..=ny as isize)
                .map(|j| reconstruct_checked(self.limiter, check, p(i, j - 1), p(i, j), p(i, j + 1)))
                .collect();
            for j in 0..=ny {
                let f = face(Axis::Y, &faces[j].1, &faces[j + 1].0, &|| format!("y-face ({i}, {j})"))?;
                if j < ny {
                    let o = &mut out[j * nx + i as usize];
                    *o = linalg::axpy(o, ihy, &f);
                }
                if j > 0 {
                    let o = &mut out[(j - 1) * nx + i as usize];
                    *o = linalg::axpy(o, -ihy, &f);
                }
            }
        }
        Ok(out)
    }

    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let mut vmax = 0.0_f64;
        for w in &self.cells {
            vmax = vmax.max(self.model.max_speed(w).map_err(at(|| "cell".to_string()))?);
        }
        if vmax <= 0.0 {
            return Err(Error::Numerical("zero wave speed, cannot set a CFL step".into()));
        }
        let dt = (self.alpha_cfl * self.grid.h_min() / vmax).min(t_end - self.t);
        let k1 = self.rhs(&self.cells, self.t)?;
        let u1: Vec<Vector<N>> = self
            .cells
            .iter()
            .zip(&k1)
            .map(|(u, k)| linalg::axpy(u, dt, k))
            .collect();
        check_finite(&u1, self.step, 1)?;
        let k2 = self.rhs(&u1, self.t + dt)?;
        let next: Vec<Vector<N>> = self
            .cells
            .iter()
            .zip(k1.iter().zip(&k2))
            .map(|(u, (a, b))| std::array::from_fn(|k| u[k] + 0.5 * dt * (a[k] + b[k])))
            .collect();
        check_finite(&next, self.step, 2)?;
        self.cells = next;
        self.step += 1;
        self.t = if t_end - self.t <= dt { t_end } else { self.t + dt };
        Ok(dt)
    }

    pub fn run(&mut self, t_end: f64) -> Result<usize> {
        let start = self.step;
        while self.t < t_end {
            self.step(t_end)?;
        }
        Ok(self.step - start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limiters_vanish_at_extrema() {
        for l in [Limiter::VanAlbada, Limiter::Superbee] {
            assert_eq!(limited_slope(l, 1.0, -2.0), 0.0);
            assert_eq!(limited_slope(l, 0.0, 1.0), 0.0);
            assert!((limited_slope(l, 0.3, 0.3) - 0.3).abs() < 1e-15);
        }
        assert!((limited_slope(Limiter::Superbee, 1.0, 3.0) - 2.0).abs() < 1e-15);
    }
}
