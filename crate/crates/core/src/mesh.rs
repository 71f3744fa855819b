//! Uniform 1D/2D grids and the hybrid (nodal + cell-average) field containers.
//!
//! Periodic directions store `N` nodal values (node `N` is node `0`); bounded
//! directions store `N + 1`. 2D arrays are row-major with `x` fastest.

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// Aspect-ratio bound above which a 2D grid is reported as stretched.
pub const ASPECT_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub h: f64,
    pub periodic: bool,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize, periodic: bool) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::config(format!("invalid domain [{min}, {max}]")));
        }
        if n < 4 {
            return Err(Error::config(format!("need at least 4 cells, got {n}")));
        }
        Ok(Grid1D {
            min,
            max,
            n,
            h: (max - min) / n as f64,
            periodic,
        })
    }

    /// Coordinate of node `j`, `0 <= j <= n`. Node `n` is the right end exactly.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        if j == self.n {
            self.max
        } else {
            self.min + j as f64 * self.h
        }
    }

    /// Centre of cell `j`, i.e. `x_{j+1/2}`.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        self.min + (j as f64 + 0.5) * self.h
    }

    /// Number of stored nodal values.
    #[inline]
    pub fn n_nodes(&self) -> usize {
        if self.periodic {
            self.n
        } else {
            self.n + 1
        }
    }

    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    /// Storage index of logical node `j` (`0 <= j <= n`).
    #[inline]
    pub fn node_index(&self, j: usize) -> usize {
        if self.periodic && j == self.n {
            0
        } else {
            j
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        let g = Grid2D { x, y };
        if !g.aspect_ok() {
            log::warn!(
                "stretched grid: hx = {}, hy = {} exceeds aspect bound {}",
                x.h,
                y.h,
                ASPECT_BOUND
            );
        }
        g
    }

    pub fn aspect_ok(&self) -> bool {
        self.x.h / ASPECT_BOUND <= self.y.h && self.y.h <= ASPECT_BOUND * self.x.h
    }

    #[inline]
    pub fn nnx(&self) -> usize {
        self.x.n_nodes()
    }

    #[inline]
    pub fn nny(&self) -> usize {
        self.y.n_nodes()
    }

    pub fn h_min(&self) -> f64 {
        self.x.h.min(self.y.h)
    }

    pub fn cell_area(&self) -> f64 {
        self.x.h * self.y.h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridField1D<const N: usize> {
    pub nodal: Vec<Vector<N>>,
    pub cells: Vec<Vector<N>>,
    pub periodic: bool,
}

impl<const N: usize> HybridField1D<N> {
    pub fn zeros(grid: &Grid1D) -> Self {
        HybridField1D {
            nodal: vec![[0.0; N]; grid.n_nodes()],
            cells: vec![[0.0; N]; grid.n],
            periodic: grid.periodic,
        }
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Nodal value at logical index `j`; index `N` wraps to `0` for periodic fields.
    #[inline]
    pub fn node(&self, j: usize) -> &Vector<N> {
        if self.periodic && j == self.cells.len() {
            &self.nodal[0]
        } else {
            &self.nodal[j]
        }
    }

    pub fn is_finite(&self) -> bool {
        self.nodal.iter().chain(&self.cells).all(crate::linalg::is_finite)
    }

    /// Extract one component as (nodal, cell) scalar arrays.
    pub fn component(&self, k: usize) -> (Vec<f64>, Vec<f64>) {
        (
            self.nodal.iter().map(|w| w[k]).collect(),
            self.cells.iter().map(|w| w[k]).collect(),
        )
    }
}

/// Componentwise max abs difference: `(nodal_max, cell_max)`.
pub fn field_linf_diff<const N: usize>(a: &HybridField1D<N>, b: &HybridField1D<N>) -> Result<(f64, f64)> {
    if a.nodal.len() != b.nodal.len() || a.cells.len() != b.cells.len() {
        return Err(Error::Shape(format!(
            "({}, {}) vs ({}, {}) entries",
            a.nodal.len(),
            a.cells.len(),
            b.nodal.len(),
            b.cells.len()
        )));
    }
    let diff = |x: &[Vector<N>], y: &[Vector<N>]| {
        x.iter()
            .zip(y)
            .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).abs()))
            .fold(0.0_f64, f64::max)
    };
    Ok((diff(&a.nodal, &b.nodal), diff(&a.cells, &b.cells)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridField2D<const N: usize> {
    pub nodal: Vec<Vector<N>>,
    pub cells: Vec<Vector<N>>,
    pub nx: usize,
    pub ny: usize,
    /// Stored node counts per direction.
    pub nnx: usize,
    pub nny: usize,
}

impl<const N: usize> HybridField2D<N> {
    pub fn zeros(grid: &Grid2D) -> Self {
        HybridField2D {
            nodal: vec![[0.0; N]; grid.nnx() * grid.nny()],
            cells: vec![[0.0; N]; grid.x.n * grid.y.n],
            nx: grid.x.n,
            ny: grid.y.n,
            nnx: grid.nnx(),
            nny: grid.nny(),
        }
    }

    #[inline]
    pub fn node_idx(&self, i: usize, j: usize) -> usize {
        j * self.nnx + i
    }

    #[inline]
    pub fn cell_idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Nodal value at logical `(i, j)`, wrapping `nx`/`ny` in periodic directions.
    #[inline]
    pub fn node(&self, i: usize, j: usize) -> &Vector<N> {
        let i = if i == self.nnx { 0 } else { i };
        let j = if j == self.nny { 0 } else { j };
        &self.nodal[j * self.nnx + i]
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &Vector<N> {
        &self.cells[j * self.nx + i]
    }

    pub fn is_finite(&self) -> bool {
        self.nodal.iter().chain(&self.cells).all(crate::linalg::is_finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_coordinates() {
        let g = Grid1D::new(0.0, 1.0, 20, true).unwrap();
        assert_eq!(g.h, 0.05);
        assert_eq!(g.node(10), 0.5);
        let g = Grid1D::new(-2.0, 2.0, 40, true).unwrap();
        assert!((g.h - 0.1).abs() < 1e-15);
        assert!((g.center(0) + 1.95).abs() < 1e-15);
        assert!(Grid1D::new(0.0, 1.0, 3, false).is_err());
        assert!(Grid1D::new(1.0, 0.0, 10, false).is_err());
    }

    #[test]
    fn linf_diff() {
        let g = Grid1D::new(0.0, 1.0, 4, false).unwrap();
        let a = HybridField1D::<1>::zeros(&g);
        let mut b = a.clone();
        assert_eq!(field_linf_diff(&a, &b).unwrap(), (0.0, 0.0));
        b.nodal[2] = [0.5];
        assert_eq!(field_linf_diff(&a, &b).unwrap(), (0.5, 0.0));
        b.cells.pop();
        assert!(field_linf_diff(&a, &b).is_err());
    }

    #[test]
    fn periodic_wrap() {
        let g = Grid1D::new(0.0, 1.0, 8, true).unwrap();
        let mut f = HybridField1D::<1>::zeros(&g);
        f.nodal[0] = [3.0];
        assert_eq!(f.node(8), &[3.0]);
        assert_eq!(f.nodal.len(), 8);
    }

    #[test]
    fn stretched_grid_is_flagged() {
        let x = Grid1D::new(0.0, 1.0, 100, false).unwrap();
        let y = Grid1D::new(0.0, 1.0, 5, false).unwrap();
        assert!(!Grid2D::new(x, y).aspect_ok());
        assert!(Grid2D::new(x, x).aspect_ok());
    }
}
