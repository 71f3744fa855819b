//! Boundary policies, ghost states and strong nodal enforcement.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::physics::{Axis, Model1D, Model2D};

pub type StateFn<const N: usize> = Arc<dyn Fn(f64) -> Vector<N> + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryKind<const N: usize> {
    Periodic,
    /// Boundary node pinned to a prescribed state at every RK stage; constant
    /// ghost states equal to that state.
    Dirichlet(StateFn<N>),
    /// Reflecting wall: node momentum zeroed, ghosts mirrored.
    Wall,
    /// Fixed inflow state (node pinned, constant ghosts).
    Inflow(Vector<N>),
    /// Zeroth-order extrapolation ghosts.
    Outflow,
    /// Characteristic closure without data: outgoing characteristics use the
    /// one-sided boundary operator, incoming ones are frozen. 1D only.
    OneSided,
}

impl<const N: usize> fmt::Debug for BoundaryKind<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::Periodic => write!(f, "Periodic"),
            BoundaryKind::Dirichlet(_) => write!(f, "Dirichlet(..)"),
            BoundaryKind::Wall => write!(f, "Wall"),
            BoundaryKind::Inflow(s) => write!(f, "Inflow({s:?})"),
            BoundaryKind::Outflow => write!(f, "Outflow"),
            BoundaryKind::OneSided => write!(f, "OneSided"),
        }
    }
}

impl<const N: usize> BoundaryKind<N> {
    pub fn dirichlet(g: impl Fn(f64) -> Vector<N> + Send + Sync + 'static) -> Self {
        BoundaryKind::Dirichlet(Arc::new(g))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryKind::Periodic)
    }

    /// State the boundary node is pinned to at time `t`, if any.
    pub fn pinned_state(&self, t: f64) -> Option<Vector<N>> {
        match self {
            BoundaryKind::Dirichlet(g) => Some(g(t)),
            BoundaryKind::Inflow(s) => Some(*s),
            _ => None,
        }
    }

    /// Ghost node `k >= 1` steps outside. `inner(m)` is the node `m` steps
    /// inside (0 = boundary node).
    pub fn ghost_node(
        &self,
        k: usize,
        t: f64,
        inner: impl Fn(usize) -> Vector<N>,
        mirror: impl Fn(&Vector<N>) -> Vector<N>,
    ) -> Vector<N> {
        match self {
            BoundaryKind::Wall => mirror(&inner(k)),
            BoundaryKind::Dirichlet(g) => g(t),
            BoundaryKind::Inflow(s) => *s,
            BoundaryKind::Outflow | BoundaryKind::OneSided | BoundaryKind::Periodic => inner(0),
        }
    }

    /// Ghost cell `k >= 1` layers outside. `inner(m)` is the cell `m` layers
    /// inside (0 = boundary-adjacent cell).
    pub fn ghost_cell(
        &self,
        k: usize,
        t: f64,
        inner: impl Fn(usize) -> Vector<N>,
        mirror: impl Fn(&Vector<N>) -> Vector<N>,
    ) -> Vector<N> {
        match self {
            BoundaryKind::Wall => mirror(&inner(k - 1)),
            BoundaryKind::Dirichlet(g) => g(t),
            BoundaryKind::Inflow(s) => *s,
            BoundaryKind::Outflow | BoundaryKind::OneSided | BoundaryKind::Periodic => inner(0),
        }
    }
}

/// Mirror the interior samples next to a wall: returns
/// `(ghost nodes W_{-1}, W_{-2}; ghost cells W̄_{-1/2}, W̄_{-3/2})`.
pub fn wall_ghost_states<const N: usize, M: Model1D<N>>(
    model: &M,
    nodes: [Vector<N>; 2],
    cells: [Vector<N>; 2],
) -> ([Vector<N>; 2], [Vector<N>; 2]) {
    (
        [model.mirror(&nodes[0]), model.mirror(&nodes[1])],
        [model.mirror(&cells[0]), model.mirror(&cells[1])],
    )
}

/// Strong wall condition at a node: normal momentum removed together with its
/// kinetic energy.
pub fn wall_enforce_node<const N: usize, M: Model1D<N>>(model: &M, w: &Vector<N>) -> crate::Result<Vector<N>> {
    model.check(w)?;
    Ok(model.wall_node(w))
}

#[derive(Debug, Clone)]
pub struct Boundaries1D<const N: usize> {
    pub left: BoundaryKind<N>,
    pub right: BoundaryKind<N>,
}

impl<const N: usize> Boundaries1D<N> {
    pub fn periodic() -> Self {
        Boundaries1D {
            left: BoundaryKind::Periodic,
            right: BoundaryKind::Periodic,
        }
    }

    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        let (l, r) = (self.left.is_periodic(), self.right.is_periodic());
        if l != r {
            return Err(Error::config("periodic must be set on both ends or neither"));
        }
        if l != grid.periodic {
            return Err(Error::config("boundary periodicity disagrees with the grid"));
        }
        Ok(())
    }

    /// Pin Dirichlet/inflow nodes and apply the wall condition.
    pub fn enforce<M: Model1D<N>>(&self, model: &M, field: &mut HybridField1D<N>, t: f64) {
        let last = field.nodal.len() - 1;
        for (kind, j) in [(&self.left, 0), (&self.right, last)] {
            if let Some(s) = kind.pinned_state(t) {
                field.nodal[j] = s;
            } else if matches!(kind, BoundaryKind::Wall) {
                field.nodal[j] = model.wall_node(&field.nodal[j]);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Boundaries2D<const N: usize> {
    pub left: BoundaryKind<N>,
    pub right: BoundaryKind<N>,
    pub bottom: BoundaryKind<N>,
    pub top: BoundaryKind<N>,
}

impl<const N: usize> Boundaries2D<N> {
    pub fn periodic() -> Self {
        Self::uniform(BoundaryKind::Periodic)
    }

    pub fn uniform(kind: BoundaryKind<N>) -> Self {
        Boundaries2D {
            left: kind.clone(),
            right: kind.clone(),
            bottom: kind.clone(),
            top: kind,
        }
    }

    pub fn validate(&self, grid: &Grid2D) -> Result<()> {
        for (a, b, periodic, dir) in [
            (&self.left, &self.right, grid.x.periodic, "x"),
            (&self.bottom, &self.top, grid.y.periodic, "y"),
        ] {
            if a.is_periodic() != b.is_periodic() {
                return Err(Error::config(format!(
                    "periodic must be set on both {dir} faces or neither"
                )));
            }
            if a.is_periodic() != periodic {
                return Err(Error::config(format!(
                    "{dir} boundary periodicity disagrees with the grid"
                )));
            }
            if matches!(a, BoundaryKind::OneSided) || matches!(b, BoundaryKind::OneSided) {
                return Err(Error::Unsupported("one-sided closure in 2D".into()));
            }
        }
        Ok(())
    }

    /// Faces touching node `(i, j)` as `(kind, normal axis)`.
    fn faces_at(&self, i: usize, j: usize, grid: &Grid2D) -> impl Iterator<Item = (&BoundaryKind<N>, Axis)> {
        let (nx, ny) = (grid.x.n, grid.y.n);
        [
            (!grid.x.periodic && i == 0, &self.left, Axis::X),
            (!grid.x.periodic && i == nx, &self.right, Axis::X),
            (!grid.y.periodic && j == 0, &self.bottom, Axis::Y),
            (!grid.y.periodic && j == ny, &self.top, Axis::Y),
        ]
        .into_iter()
        .filter(|(on, _, _)| *on)
        .map(|(_, k, a)| (k, a))
    }

    /// Whether node `(i, j)` is pinned to prescribed data.
    pub fn node_pinned(&self, i: usize, j: usize, grid: &Grid2D) -> bool {
        self.faces_at(i, j, grid).any(|(k, _)| k.pinned_state(0.0).is_some())
    }

    pub fn enforce<M: Model2D<N>>(&self, model: &M, grid: &Grid2D, field: &mut HybridField2D<N>, t: f64) {
        let (nnx, nny) = (field.nnx, field.nny);
        let mut visit = |i: usize, j: usize| {
            let idx = j * nnx + i;
            let mut pinned = None;
            for (k, _) in self.faces_at(i, j, grid) {
                if let Some(s) = k.pinned_state(t) {
                    pinned = Some(s);
                    break;
                }
            }
            if let Some(s) = pinned {
                field.nodal[idx] = s;
                return;
            }
            for (k, axis) in self.faces_at(i, j, grid) {
                if matches!(k, BoundaryKind::Wall) {
                    field.nodal[idx] = model.wall_node(&field.nodal[idx], axis);
                }
            }
        };
        if !grid.x.periodic {
            for j in 0..nny {
                visit(0, j);
                visit(nnx - 1, j);
            }
        }
        if !grid.y.periodic {
            for i in 0..nnx {
                visit(i, 0);
                visit(i, nny - 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::Euler1D;

    #[test]
    fn wall_node_removes_kinetic_energy() {
        let m = Euler1D::new(1.4);
        let w = m.conservative(1.0, 0.5, 1.0);
        assert!((w[2] - 2.625).abs() < 1e-14);
        let e = wall_enforce_node(&m, &w).unwrap();
        assert_eq!(e[1], 0.0);
        assert!((e[2] - 2.5).abs() < 1e-14);
        assert_eq!(e[0], 1.0);
        let still = m.conservative(1.0, 0.0, 1.0);
        assert_eq!(wall_enforce_node(&m, &still).unwrap(), still);
    }

    #[test]
    fn wall_ghosts_mirror_momentum() {
        let m = Euler1D::new(1.4);
        let a = [1.0, 0.2, 2.0];
        let (nodes, cells) = wall_ghost_states(&m, [a, a], [a, [1.0, 0.0, 2.0]]);
        assert_eq!(nodes[0], [1.0, -0.2, 2.0]);
        assert_eq!(cells[1], [1.0, 0.0, 2.0]);
        assert_eq!(m.mirror(&m.mirror(&a)), a);
    }

    #[test]
    fn outflow_copies_nearest() {
        let b = BoundaryKind::<1>::Outflow;
        let g = b.ghost_node(2, 0.0, |m| [m as f64 + 10.0], |w| *w);
        assert_eq!(g, [10.0]);
        let c = b.ghost_cell(1, 0.0, |m| [m as f64 + 3.0], |w| *w);
        assert_eq!(c, [3.0]);
    }

    #[test]
    fn mismatched_periodicity_rejected() {
        let g = Grid1D::new(0.0, 1.0, 8, true).unwrap();
        let b = Boundaries1D::<1> {
            left: BoundaryKind::Periodic,
            right: BoundaryKind::Outflow,
        };
        assert!(b.validate(&g).is_err());
        assert!(Boundaries1D::<1>::periodic().validate(&g).is_ok());
    }
}
