//! Discrete L1 norms and observed orders.

use std::sync::Arc;

use serde::Serialize;

use crate::linalg::Vector;
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::physics::{Euler1D, Euler2D};
use crate::{Error, Result};

pub type VarFn<const N: usize> = Arc<dyn Fn(&Vector<N>) -> Vec<f64> + Send + Sync>;

/// Named output variables derived from a conserved state. Unphysical states map to NaN.
#[derive(Clone)]
pub struct VarSet<const N: usize> {
    pub names: Vec<String>,
    pub eval: VarFn<N>,
}

impl<const N: usize> VarSet<N> {
    /// Raw components `w0, w1, ...` (`w` for scalars).
    pub fn components() -> Self {
        let names = if N == 1 {
            vec!["w".to_string()]
        } else {
            (0..N).map(|k| format!("w{k}")).collect()
        };
        VarSet {
            names,
            eval: Arc::new(|w| w.to_vec()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Conserved variables followed by velocity and pressure.
pub fn euler1d_vars(model: Euler1D) -> VarSet<3> {
    VarSet {
        names: ["rho", "mom", "energy", "v", "p"].map(String::from).to_vec(),
        eval: Arc::new(move |w| {
            let [_, v, p] = model.primitive(w).unwrap_or([f64::NAN; 3]);
            vec![w[0], w[1], w[2], v, p]
        }),
    }
}

pub fn euler2d_vars(model: Euler2D) -> VarSet<4> {
    VarSet {
        names: ["rho", "mom_x", "mom_y", "energy", "vx", "vy", "p"]
            .map(String::from)
            .to_vec(),
        eval: Arc::new(move |w| {
            let [_, vx, vy, p] = model.primitive(w).unwrap_or([f64::NAN; 4]);
            vec![w[0], w[1], w[2], w[3], vx, vy, p]
        }),
    }
}

/// Per-variable L1 errors. `nodal` is absent for cell-only schemes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1Errors {
    pub names: Vec<String>,
    pub cell: Vec<f64>,
    pub nodal: Option<Vec<f64>>,
}

impl L1Errors {
    pub fn cell_of(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.cell[k])
    }

    pub fn nodal_of(&self, name: &str) -> Option<f64> {
        let k = self.names.iter().position(|n| n == name)?;
        self.nodal.as_ref().map(|v| v[k])
    }
}

fn weighted_sum<const N: usize>(
    a: &[Vector<N>],
    b: &[Vector<N>],
    weights: impl Fn(usize) -> f64,
    vars: &VarSet<N>,
) -> Vec<f64> {
    let mut acc = vec![0.0; vars.len()];
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let w = weights(k);
        for (s, (p, q)) in acc.iter_mut().zip((vars.eval)(x).into_iter().zip((vars.eval)(y))) {
            *s += w * (p - q).abs();
        }
    }
    acc
}

/// Cell error `h Σ|ē|`; nodal error `h Σ|e|` with half weights on non-periodic end nodes.
pub fn l1_error_1d<const N: usize>(
    numeric: &HybridField1D<N>,
    exact: &HybridField1D<N>,
    grid: &Grid1D,
    vars: &VarSet<N>,
) -> Result<L1Errors> {
    if numeric.cells.len() != grid.n || exact.cells.len() != grid.n || numeric.nodal.len() != exact.nodal.len() {
        return Err(Error::Shape(format!(
            "L1 error on {} cells: fields have {} and {} cells",
            grid.n,
            numeric.cells.len(),
            exact.cells.len()
        )));
    }
    let h = grid.h;
    let cell = weighted_sum(&numeric.cells, &exact.cells, |_| h, vars);
    let last = numeric.nodal.len() - 1;
    let periodic = grid.periodic;
    let nodal = weighted_sum(
        &numeric.nodal,
        &exact.nodal,
        |j| if !periodic && (j == 0 || j == last) { 0.5 * h } else { h },
        vars,
    );
    Ok(L1Errors {
        names: vars.names.clone(),
        cell,
        nodal: Some(nodal),
    })
}

/// Cell-only 1D error (finite-volume baseline).
pub fn l1_error_cells_1d<const N: usize>(
    numeric: &[Vector<N>],
    exact: &[Vector<N>],
    grid: &Grid1D,
    vars: &VarSet<N>,
) -> Result<L1Errors> {
    if numeric.len() != grid.n || exact.len() != grid.n {
        return Err(Error::Shape(format!(
            "L1 error on {} cells: got {} and {}",
            grid.n,
            numeric.len(),
            exact.len()
        )));
    }
    Ok(L1Errors {
        names: vars.names.clone(),
        cell: weighted_sum(numeric, exact, |_| grid.h, vars),
        nodal: None,
    })
}

/// 2D analogue with weight `h_x h_y`; boundary nodes of non-periodic directions get half weight per direction.
pub fn l1_error_2d<const N: usize>(
    numeric: &HybridField2D<N>,
    exact: &HybridField2D<N>,
    grid: &Grid2D,
    vars: &VarSet<N>,
) -> Result<L1Errors> {
    let mut e = l1_error_cells_2d(&numeric.cells, &exact.cells, grid, vars)?;
    if numeric.nodal.len() != exact.nodal.len() || numeric.nnx != exact.nnx {
        return Err(Error::Shape("nodal arrays differ in shape".into()));
    }
    let nnx = numeric.nnx;
    let nny = numeric.nodal.len() / nnx;
    let end_weight = |k: usize, n: usize, periodic: bool| {
        if !periodic && (k == 0 || k + 1 == n) {
            0.5
        } else {
            1.0
        }
    };
    let area = grid.cell_area();
    let (px, py) = (grid.x.periodic, grid.y.periodic);
    e.nodal = Some(weighted_sum(
        &numeric.nodal,
        &exact.nodal,
        |k| area * end_weight(k % nnx, nnx, px) * end_weight(k / nnx, nny, py),
        vars,
    ));
    Ok(e)
}

pub fn l1_error_cells_2d<const N: usize>(
    numeric: &[Vector<N>],
    exact: &[Vector<N>],
    grid: &Grid2D,
    vars: &VarSet<N>,
) -> Result<L1Errors> {
    let n = grid.x.n * grid.y.n;
    if numeric.len() != n || exact.len() != n {
        return Err(Error::Shape(format!(
            "L1 error on {n} cells: got {} and {}",
            numeric.len(),
            exact.len()
        )));
    }
    Ok(L1Errors {
        names: vars.names.clone(),
        cell: weighted_sum(numeric, exact, |_| grid.cell_area(), vars),
        nodal: None,
    })
}

/// `log(e_k-1 / e_k) / log(h_k-1 / h_k)` for consecutive entries; this is
/// `log2` of the error ratio on a doubling sequence.
pub fn observed_orders(h: &[f64], errors: &[f64]) -> Vec<f64> {
    h.windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_fourth_order() {
        let h: Vec<f64> = (0..5).map(|k| 0.1 / f64::from(1 << k)).collect();
        let e: Vec<f64> = h.iter().map(|h| 3.0 * h.powi(4)).collect();
        for p in observed_orders(&h, &e) {
            assert!((p - 4.0).abs() < 1e-12);
        }
    }
}
