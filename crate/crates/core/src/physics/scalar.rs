//! Scalar models: linear advection (1D/2D) and the non-convex KPP flux.
//! Entropy pair is `s = S = w^2/2` and the density is identically one.

use super::{check_finite, Axis, Eigensystem, EntropyPair, Model1D, Model2D, ViscosityMatrices2D};
use crate::error::{Error, PhysicsError};
use crate::linalg::{Matrix, Tensor, Vector};

fn scalar_eigen(lambda: f64) -> Eigensystem<1> {
    Eigensystem {
        right: [[1.0]],
        left: [[1.0]],
        eigenvalues: [lambda],
    }
}

fn square_entropy(w: f64) -> EntropyPair {
    let s = 0.5 * w * w;
    EntropyPair { s, big_s: s }
}

const ISOTROPIC: ViscosityMatrices2D<1> = ViscosityMatrices2D {
    a1: [[1.0]],
    a2: [[0.0]],
    b1: [[0.0]],
    b2: [[1.0]],
    da1: [[[0.0]]],
    da2: [[[0.0]]],
    db1: [[[0.0]]],
    db2: [[[0.0]]],
};

/// `w_t + speed * w_x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Advection1D {
    pub speed: f64,
}

impl Model1D<1> for Advection1D {
    fn name(&self) -> &'static str {
        "advection-1d"
    }

    fn component_names(&self) -> [&'static str; 1] {
        ["w"]
    }

    fn check(&self, w: &Vector<1>) -> Result<(), PhysicsError> {
        check_finite(w)
    }

    fn flux(&self, w: &Vector<1>) -> Result<Vector<1>, PhysicsError> {
        Ok([self.speed * w[0]])
    }

    fn eigensystem(&self, _w: &Vector<1>) -> Result<Eigensystem<1>, PhysicsError> {
        Ok(scalar_eigen(self.speed))
    }

    fn max_speed(&self, _w: &Vector<1>) -> Result<f64, PhysicsError> {
        Ok(self.speed.abs())
    }

    fn entropy(&self, w: &Vector<1>) -> Result<EntropyPair, PhysicsError> {
        Ok(square_entropy(w[0]))
    }

    fn velocity(&self, _w: &Vector<1>) -> f64 {
        self.speed
    }

    fn density(&self, _w: &Vector<1>) -> f64 {
        1.0
    }

    fn viscosity_matrix(&self, _w: &Vector<1>) -> Result<(Matrix<1>, Tensor<1>), PhysicsError> {
        Ok(([[1.0]], [[[0.0]]]))
    }

    fn mirror(&self, w: &Vector<1>) -> Vector<1> {
        *w
    }

    fn wall_node(&self, w: &Vector<1>) -> Vector<1> {
        *w
    }

    fn roe_flux(&self, l: &Vector<1>, r: &Vector<1>) -> Result<Vector<1>, Error> {
        Ok([if self.speed > 0.0 {
            self.speed * l[0]
        } else {
            self.speed * r[0]
        }])
    }
}

/// `w_t + ax * w_x + ay * w_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Advection2D {
    pub ax: f64,
    pub ay: f64,
}

impl Model2D<1> for Advection2D {
    fn name(&self) -> &'static str {
        "advection-2d"
    }

    fn component_names(&self) -> [&'static str; 1] {
        ["w"]
    }

    fn check(&self, w: &Vector<1>) -> Result<(), PhysicsError> {
        check_finite(w)
    }

    fn flux(&self, w: &Vector<1>, axis: Axis) -> Result<Vector<1>, PhysicsError> {
        Ok([match axis {
            Axis::X => self.ax,
            Axis::Y => self.ay,
        } * w[0]])
    }

    fn eigensystem(&self, _w: &Vector<1>, axis: Axis) -> Result<Eigensystem<1>, PhysicsError> {
        Ok(scalar_eigen(match axis {
            Axis::X => self.ax,
            Axis::Y => self.ay,
        }))
    }

    fn max_speed(&self, _w: &Vector<1>) -> Result<f64, PhysicsError> {
        Ok(self.ax.hypot(self.ay))
    }

    fn axis_speed(&self, _w: &Vector<1>, axis: Axis) -> Result<f64, PhysicsError> {
        Ok(match axis {
            Axis::X => self.ax.abs(),
            Axis::Y => self.ay.abs(),
        })
    }

    fn entropy(&self, w: &Vector<1>) -> Result<EntropyPair, PhysicsError> {
        Ok(square_entropy(w[0]))
    }

    fn entropy_gradient(&self, w: &Vector<1>) -> Result<Vector<1>, PhysicsError> {
        Ok([w[0]])
    }

    fn velocity(&self, _w: &Vector<1>) -> [f64; 2] {
        [self.ax, self.ay]
    }

    fn density(&self, _w: &Vector<1>) -> f64 {
        1.0
    }

    fn viscosity_matrices(&self, _w: &Vector<1>) -> Result<ViscosityMatrices2D<1>, PhysicsError> {
        Ok(ISOTROPIC)
    }

    fn mirror(&self, w: &Vector<1>, _axis: Axis) -> Vector<1> {
        *w
    }

    fn wall_node(&self, w: &Vector<1>, _axis: Axis) -> Vector<1> {
        *w
    }
}

/// KPP fluxes `(sin w, cos w)`.
pub fn kpp_flux(w: f64) -> (f64, f64) {
    (w.sin(), w.cos())
}

/// KPP characteristic velocity `(cos w, -sin w)`.
pub fn kpp_velocity(w: f64) -> (f64, f64) {
    (w.cos(), -w.sin())
}

/// `w_t + (sin w)_x + (cos w)_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Kpp;

impl Model2D<1> for Kpp {
    fn name(&self) -> &'static str {
        "kpp"
    }

    fn component_names(&self) -> [&'static str; 1] {
        ["w"]
    }

    fn check(&self, w: &Vector<1>) -> Result<(), PhysicsError> {
        check_finite(w)
    }

    fn flux(&self, w: &Vector<1>, axis: Axis) -> Result<Vector<1>, PhysicsError> {
        let (f, g) = kpp_flux(w[0]);
        Ok([if axis == Axis::X { f } else { g }])
    }

    fn eigensystem(&self, w: &Vector<1>, axis: Axis) -> Result<Eigensystem<1>, PhysicsError> {
        let (a, b) = kpp_velocity(w[0]);
        Ok(scalar_eigen(if axis == Axis::X { a } else { b }))
    }

    fn max_speed(&self, _w: &Vector<1>) -> Result<f64, PhysicsError> {
        Ok(1.0)
    }

    fn axis_speed(&self, w: &Vector<1>, axis: Axis) -> Result<f64, PhysicsError> {
        let (a, b) = kpp_velocity(w[0]);
        Ok(if axis == Axis::X { a.abs() } else { b.abs() })
    }

    fn entropy(&self, w: &Vector<1>) -> Result<EntropyPair, PhysicsError> {
        Ok(square_entropy(w[0]))
    }

    fn entropy_gradient(&self, w: &Vector<1>) -> Result<Vector<1>, PhysicsError> {
        Ok([w[0]])
    }

    fn velocity(&self, w: &Vector<1>) -> [f64; 2] {
        let (a, b) = kpp_velocity(w[0]);
        [a, b]
    }

    fn density(&self, _w: &Vector<1>) -> f64 {
        1.0
    }

    fn viscosity_matrices(&self, _w: &Vector<1>) -> Result<ViscosityMatrices2D<1>, PhysicsError> {
        Ok(ISOTROPIC)
    }

    fn mirror(&self, w: &Vector<1>, _axis: Axis) -> Vector<1> {
        *w
    }

    fn wall_node(&self, w: &Vector<1>, _axis: Axis) -> Vector<1> {
        *w
    }
}
