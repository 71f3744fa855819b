//! Equation models: fluxes, characteristic decompositions, entropy pairs,
//! wave speeds and the viscosity scaling matrices.
//!
//! Every model exposes the same interface whether it is scalar or a system, so
//! the right-hand-side code never branches on the equation.

mod euler;
mod scalar;

pub use euler::{Euler1D, Euler2D, EulerState1D, EulerState2D, DENSITY_FLOOR, PRESSURE_FLOOR};
pub use scalar::{kpp_flux, kpp_velocity, Advection1D, Advection2D, Kpp};

use crate::error::{Error, PhysicsError};
use crate::linalg::{Matrix, Tensor, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Flux Jacobian `J = R diag(eigenvalues) L` with `L = R^{-1}`.
/// Eigenvalues are sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const N: usize> {
    pub right: Matrix<N>,
    pub left: Matrix<N>,
    pub eigenvalues: Vector<N>,
}

/// Specific entropy `s` and conservative entropy `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub s: f64,
    pub big_s: f64,
}

/// Scaling matrices of the 2D viscous terms and their state derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityMatrices2D<const N: usize> {
    pub a1: Matrix<N>,
    pub a2: Matrix<N>,
    pub b1: Matrix<N>,
    pub b2: Matrix<N>,
    pub da1: Tensor<N>,
    pub da2: Tensor<N>,
    pub db1: Tensor<N>,
    pub db2: Tensor<N>,
}

pub trait Model1D<const N: usize>: Send + Sync {
    fn name(&self) -> &'static str;
    fn component_names(&self) -> [&'static str; N];
    /// Reject states the equation of state cannot handle.
    fn check(&self, w: &Vector<N>) -> Result<(), PhysicsError>;
    fn flux(&self, w: &Vector<N>) -> Result<Vector<N>, PhysicsError>;
    fn eigensystem(&self, w: &Vector<N>) -> Result<Eigensystem<N>, PhysicsError>;
    fn max_speed(&self, w: &Vector<N>) -> Result<f64, PhysicsError>;
    fn entropy(&self, w: &Vector<N>) -> Result<EntropyPair, PhysicsError>;
    /// Transport velocity used by the entropy residual.
    fn velocity(&self, w: &Vector<N>) -> f64;
    /// Density entering the global statistics (1 for scalar models).
    fn density(&self, w: &Vector<N>) -> f64;
    fn viscosity_matrix(&self, w: &Vector<N>) -> Result<(Matrix<N>, Tensor<N>), PhysicsError>;
    /// Reflection across a wall: negate the normal momentum.
    fn mirror(&self, w: &Vector<N>) -> Vector<N>;
    /// Strong wall condition at a boundary node.
    fn wall_node(&self, w: &Vector<N>) -> Vector<N>;
    fn roe_flux(&self, _l: &Vector<N>, _r: &Vector<N>) -> Result<Vector<N>, Error> {
        Err(Error::Unsupported(format!("Roe flux for {}", self.name())))
    }
}

pub trait Model2D<const N: usize>: Send + Sync {
    fn name(&self) -> &'static str;
    fn component_names(&self) -> [&'static str; N];
    fn check(&self, w: &Vector<N>) -> Result<(), PhysicsError>;
    fn flux(&self, w: &Vector<N>, axis: Axis) -> Result<Vector<N>, PhysicsError>;
    fn eigensystem(&self, w: &Vector<N>, axis: Axis) -> Result<Eigensystem<N>, PhysicsError>;
    /// Euclidean transport speed plus sound speed.
    fn max_speed(&self, w: &Vector<N>) -> Result<f64, PhysicsError>;
    /// Largest characteristic speed along one axis.
    fn axis_speed(&self, w: &Vector<N>, axis: Axis) -> Result<f64, PhysicsError>;
    fn entropy(&self, w: &Vector<N>) -> Result<EntropyPair, PhysicsError>;
    fn entropy_gradient(&self, w: &Vector<N>) -> Result<Vector<N>, PhysicsError>;
    fn velocity(&self, w: &Vector<N>) -> [f64; 2];
    fn density(&self, w: &Vector<N>) -> f64;
    fn viscosity_matrices(&self, w: &Vector<N>) -> Result<ViscosityMatrices2D<N>, PhysicsError>;
    fn mirror(&self, w: &Vector<N>, axis: Axis) -> Vector<N>;
    fn wall_node(&self, w: &Vector<N>, axis: Axis) -> Vector<N>;
}

pub(crate) fn check_finite<const N: usize>(w: &Vector<N>) -> Result<(), PhysicsError> {
    if w.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(PhysicsError::NonFinite)
    }
}
