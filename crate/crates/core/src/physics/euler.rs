//! Compressible Euler equations with a polytropic gas, `p = (gamma - 1) rho e`.

use super::{check_finite, Axis, Eigensystem, EntropyPair, Model1D, Model2D, ViscosityMatrices2D};
use crate::error::{Error, PhysicsError};
use crate::linalg::{Matrix, Tensor, Vector};

pub const DENSITY_FLOOR: f64 = 1e-12;
pub const PRESSURE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState1D {
    pub rho: f64,
    pub mom: f64,
    pub ener: f64,
}

impl EulerState1D {
    pub fn from_primitive(rho: f64, v: f64, p: f64, gamma: f64) -> Self {
        EulerState1D {
            rho,
            mom: rho * v,
            ener: p / (gamma - 1.0) + 0.5 * rho * v * v,
        }
    }

    pub fn to_vector(self) -> Vector<3> {
        [self.rho, self.mom, self.ener]
    }

    pub fn from_vector(w: &Vector<3>) -> Self {
        EulerState1D {
            rho: w[0],
            mom: w[1],
            ener: w[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState2D {
    pub rho: f64,
    pub mom_x: f64,
    pub mom_y: f64,
    pub ener: f64,
}

impl EulerState2D {
    pub fn from_primitive(rho: f64, vx: f64, vy: f64, p: f64, gamma: f64) -> Self {
        EulerState2D {
            rho,
            mom_x: rho * vx,
            mom_y: rho * vy,
            ener: p / (gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy),
        }
    }

    pub fn to_vector(self) -> Vector<4> {
        [self.rho, self.mom_x, self.mom_y, self.ener]
    }

    pub fn from_vector(w: &Vector<4>) -> Self {
        EulerState2D {
            rho: w[0],
            mom_x: w[1],
            mom_y: w[2],
            ener: w[3],
        }
    }
}

fn check_rho(rho: f64) -> Result<(), PhysicsError> {
    if !rho.is_finite() {
        Err(PhysicsError::NonFinite)
    } else if rho <= DENSITY_FLOOR {
        Err(PhysicsError::Density(rho))
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<(), PhysicsError> {
    if !p.is_finite() {
        Err(PhysicsError::NonFinite)
    } else if p <= PRESSURE_FLOOR {
        Err(PhysicsError::Pressure(p))
    } else {
        Ok(())
    }
}

/// Eigenvectors of the x-flux Jacobian for normal speed `u`, tangential speed
/// `vt` (ignored in 1D), total enthalpy `hh` and sound speed `c`.
fn eigen_1d(gamma: f64, u: f64, hh: f64, c: f64) -> Eigensystem<3> {
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = 0.5 * b1 * u * u;
    let right = [
        [1.0, 1.0, 1.0],
        [u - c, u, u + c],
        [hh - u * c, 0.5 * u * u, hh + u * c],
    ];
    let left = [
        [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1],
        [1.0 - b2, b1 * u, -b1],
        [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1],
    ];
    Eigensystem {
        right,
        left,
        eigenvalues: [u - c, u, u + c],
    }
}

fn eigen_2d_x(gamma: f64, u: f64, v: f64, hh: f64, c: f64) -> Eigensystem<4> {
    let b1 = (gamma - 1.0) / (c * c);
    let q2 = u * u + v * v;
    let b2 = 0.5 * b1 * q2;
    let right = [
        [1.0, 1.0, 0.0, 1.0],
        [u - c, u, 0.0, u + c],
        [v, v, 1.0, v],
        [hh - u * c, 0.5 * q2, v, hh + u * c],
    ];
    let left = [
        [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-v, 0.0, 1.0, 0.0],
        [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
    ];
    Eigensystem {
        right,
        left,
        eigenvalues: [u - c, u, u, u + c],
    }
}

/// 1D Euler: `W = (rho, rho v, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler1D {
    pub gamma: f64,
}

impl Euler1D {
    pub fn new(gamma: f64) -> Self {
        Euler1D { gamma }
    }

    /// `(rho, v, p)` with positivity checks.
    pub fn primitive(&self, w: &Vector<3>) -> Result<[f64; 3], PhysicsError> {
        check_finite(w)?;
        check_rho(w[0])?;
        let v = w[1] / w[0];
        let p = (self.gamma - 1.0) * (w[2] - 0.5 * w[1] * v);
        check_p(p)?;
        Ok([w[0], v, p])
    }

    pub fn conservative(&self, rho: f64, v: f64, p: f64) -> Vector<3> {
        EulerState1D::from_primitive(rho, v, p, self.gamma).to_vector()
    }

    pub fn sound_speed(&self, w: &Vector<3>) -> Result<f64, PhysicsError> {
        let [rho, _, p] = self.primitive(w)?;
        Ok((self.gamma * p / rho).sqrt())
    }

    fn eigen_from_roe(&self, l: &Vector<3>, r: &Vector<3>) -> Result<Eigensystem<3>, PhysicsError> {
        let [rl, ul, pl] = self.primitive(l)?;
        let [rr, ur, pr] = self.primitive(r)?;
        let (sl, sr) = (rl.sqrt(), rr.sqrt());
        let hl = (l[2] + pl) / rl;
        let hr = (r[2] + pr) / rr;
        let u = (sl * ul + sr * ur) / (sl + sr);
        let hh = (sl * hl + sr * hr) / (sl + sr);
        let c2 = (self.gamma - 1.0) * (hh - 0.5 * u * u);
        check_p(c2)?;
        Ok(eigen_1d(self.gamma, u, hh, c2.sqrt()))
    }
}

impl Model1D<3> for Euler1D {
    fn name(&self) -> &'static str {
        "euler-1d"
    }

    fn component_names(&self) -> [&'static str; 3] {
        ["rho", "mom", "ener"]
    }

    fn check(&self, w: &Vector<3>) -> Result<(), PhysicsError> {
        self.primitive(w).map(|_| ())
    }

    fn flux(&self, w: &Vector<3>) -> Result<Vector<3>, PhysicsError> {
        let [_, v, p] = self.primitive(w)?;
        Ok([w[1], w[1] * v + p, (w[2] + p) * v])
    }

    fn eigensystem(&self, w: &Vector<3>) -> Result<Eigensystem<3>, PhysicsError> {
        let [rho, v, p] = self.primitive(w)?;
        let c = (self.gamma * p / rho).sqrt();
        Ok(eigen_1d(self.gamma, v, (w[2] + p) / rho, c))
    }

    fn max_speed(&self, w: &Vector<3>) -> Result<f64, PhysicsError> {
        let [rho, v, p] = self.primitive(w)?;
        Ok(v.abs() + (self.gamma * p / rho).sqrt())
    }

    fn entropy(&self, w: &Vector<3>) -> Result<EntropyPair, PhysicsError> {
        let [rho, _, p] = self.primitive(w)?;
        let big_s = p / rho.powf(self.gamma - 1.0);
        Ok(EntropyPair { s: big_s / rho, big_s })
    }

    fn velocity(&self, w: &Vector<3>) -> f64 {
        w[1] / w[0]
    }

    fn density(&self, w: &Vector<3>) -> f64 {
        w[0]
    }

    fn viscosity_matrix(&self, w: &Vector<3>) -> Result<(Matrix<3>, Tensor<3>), PhysicsError> {
        check_finite(w)?;
        check_rho(w[0])?;
        let rho = w[0];
        let v = w[1] / rho;
        let e = w[2] / rho;
        let a = [[1.0, 0.0, 0.0], [-v, 1.0, 0.0], [-e, 0.0, 1.0]];
        let mut t = [[[0.0; 3]; 3]; 3];
        t[1][0] = [v / rho, -1.0 / rho, 0.0];
        t[2][0] = [e / rho, 0.0, -1.0 / rho];
        Ok((a, t))
    }

    fn mirror(&self, w: &Vector<3>) -> Vector<3> {
        [w[0], -w[1], w[2]]
    }

    fn wall_node(&self, w: &Vector<3>) -> Vector<3> {
        [w[0], 0.0, w[2] - 0.5 * w[1] * w[1] / w[0]]
    }

    fn roe_flux(&self, l: &Vector<3>, r: &Vector<3>) -> Result<Vector<3>, Error> {
        let fl = self.flux(l)?;
        let fr = self.flux(r)?;
        let es = self.eigen_from_roe(l, r)?;
        let dw = crate::linalg::sub(r, l);
        let alpha = crate::linalg::matvec(&es.left, &dw);
        let mut f: Vector<3> = std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]));
        for k in 0..3 {
            let a = 0.5 * es.eigenvalues[k].abs() * alpha[k];
            for (row, fi) in f.iter_mut().enumerate() {
                *fi -= a * es.right[row][k];
            }
        }
        Ok(f)
    }
}

/// 2D Euler: `W = (rho, rho v1, rho v2, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler2D {
    pub gamma: f64,
}

fn swap12<T: Copy>(m: &mut [T; 4]) {
    m.swap(1, 2);
}

impl Euler2D {
    pub fn new(gamma: f64) -> Self {
        Euler2D { gamma }
    }

    /// `(rho, v1, v2, p)` with positivity checks.
    pub fn primitive(&self, w: &Vector<4>) -> Result<[f64; 4], PhysicsError> {
        check_finite(w)?;
        check_rho(w[0])?;
        let v1 = w[1] / w[0];
        let v2 = w[2] / w[0];
        let p = (self.gamma - 1.0) * (w[3] - 0.5 * (w[1] * v1 + w[2] * v2));
        check_p(p)?;
        Ok([w[0], v1, v2, p])
    }

    pub fn conservative(&self, rho: f64, v1: f64, v2: f64, p: f64) -> Vector<4> {
        EulerState2D::from_primitive(rho, v1, v2, p, self.gamma).to_vector()
    }

    pub fn pressure(&self, w: &Vector<4>) -> Result<f64, PhysicsError> {
        Ok(self.primitive(w)?[3])
    }
}

impl Model2D<4> for Euler2D {
    fn name(&self) -> &'static str {
        "euler-2d"
    }

    fn component_names(&self) -> [&'static str; 4] {
        ["rho", "mom_x", "mom_y", "ener"]
    }

    fn check(&self, w: &Vector<4>) -> Result<(), PhysicsError> {
        self.primitive(w).map(|_| ())
    }

    fn flux(&self, w: &Vector<4>, axis: Axis) -> Result<Vector<4>, PhysicsError> {
        let [_, v1, v2, p] = self.primitive(w)?;
        Ok(match axis {
            Axis::X => [w[1], w[1] * v1 + p, w[2] * v1, (w[3] + p) * v1],
            Axis::Y => [w[2], w[1] * v2, w[2] * v2 + p, (w[3] + p) * v2],
        })
    }

    fn eigensystem(&self, w: &Vector<4>, axis: Axis) -> Result<Eigensystem<4>, PhysicsError> {
        let [rho, v1, v2, p] = self.primitive(w)?;
        let c = (self.gamma * p / rho).sqrt();
        let hh = (w[3] + p) / rho;
        Ok(match axis {
            Axis::X => eigen_2d_x(self.gamma, v1, v2, hh, c),
            Axis::Y => {
                // Solve in the frame with the two momentum components swapped.
                let mut es = eigen_2d_x(self.gamma, v2, v1, hh, c);
                es.right.swap(1, 2);
                for row in es.left.iter_mut() {
                    swap12(row);
                }
                es
            }
        })
    }

    fn max_speed(&self, w: &Vector<4>) -> Result<f64, PhysicsError> {
        let [rho, v1, v2, p] = self.primitive(w)?;
        Ok(v1.hypot(v2) + (self.gamma * p / rho).sqrt())
    }

    fn axis_speed(&self, w: &Vector<4>, axis: Axis) -> Result<f64, PhysicsError> {
        let [rho, v1, v2, p] = self.primitive(w)?;
        let vn = if axis == Axis::X { v1 } else { v2 };
        Ok(vn.abs() + (self.gamma * p / rho).sqrt())
    }

    fn entropy(&self, w: &Vector<4>) -> Result<EntropyPair, PhysicsError> {
        let [rho, _, _, p] = self.primitive(w)?;
        let big_s = p / rho.powf(self.gamma - 1.0);
        Ok(EntropyPair { s: big_s / rho, big_s })
    }

    fn entropy_gradient(&self, w: &Vector<4>) -> Result<Vector<4>, PhysicsError> {
        let [rho, v1, v2, p] = self.primitive(w)?;
        let g1 = self.gamma - 1.0;
        let rg = rho.powf(-self.gamma);
        Ok([
            g1 * 0.5 * (v1 * v1 + v2 * v2) * rg - self.gamma * p * rg / rho,
            -g1 * v1 * rg,
            -g1 * v2 * rg,
            g1 * rg,
        ])
    }

    fn velocity(&self, w: &Vector<4>) -> [f64; 2] {
        [w[1] / w[0], w[2] / w[0]]
    }

    fn density(&self, w: &Vector<4>) -> f64 {
        w[0]
    }

    fn viscosity_matrices(&self, w: &Vector<4>) -> Result<ViscosityMatrices2D<4>, PhysicsError> {
        check_finite(w)?;
        check_rho(w[0])?;
        let rho = w[0];
        let (v1, v2, e) = (w[1] / rho, w[2] / rho, w[3] / rho);
        let gv1 = [-v1 / rho, 1.0 / rho, 0.0, 0.0];
        let gv2 = [-v2 / rho, 0.0, 1.0 / rho, 0.0];
        let ge = [-e / rho, 0.0, 0.0, 1.0 / rho];
        let lin =
            |a: f64, x: &[f64; 4], b: f64, y: &[f64; 4]| -> [f64; 4] { std::array::from_fn(|k| a * x[k] + b * y[k]) };
        let z = [[[0.0; 4]; 4]; 4];

        let a1 = [
            [1.0, 0.0, 0.0, 0.0],
            [-v1, 1.0, 0.0, 0.0],
            [-0.5 * v2, 0.0, 0.5, 0.0],
            [-e + 0.5 * v2 * v2, 0.0, -0.5 * v2, 1.0],
        ];
        let mut da1 = z;
        da1[1][0] = lin(-1.0, &gv1, 0.0, &gv1);
        da1[2][0] = lin(-0.5, &gv2, 0.0, &gv2);
        da1[3][0] = lin(-1.0, &ge, v2, &gv2);
        da1[3][2] = lin(-0.5, &gv2, 0.0, &gv2);

        let a2 = [
            [0.0; 4],
            [0.0; 4],
            [-0.5 * v1, 0.5, 0.0, 0.0],
            [-0.5 * v1 * v2, 0.5 * v2, 0.0, 0.0],
        ];
        let mut da2 = z;
        da2[2][0] = lin(-0.5, &gv1, 0.0, &gv1);
        da2[3][0] = lin(-0.5 * v2, &gv1, -0.5 * v1, &gv2);
        da2[3][1] = lin(0.5, &gv2, 0.0, &gv2);

        let b1 = [
            [0.0; 4],
            [-0.5 * v2, 0.0, 0.5, 0.0],
            [0.0; 4],
            [-0.5 * v1 * v2, 0.0, 0.5 * v1, 0.0],
        ];
        let mut db1 = z;
        db1[1][0] = lin(-0.5, &gv2, 0.0, &gv2);
        db1[3][0] = lin(-0.5 * v2, &gv1, -0.5 * v1, &gv2);
        db1[3][2] = lin(0.5, &gv1, 0.0, &gv1);

        let b2 = [
            [1.0, 0.0, 0.0, 0.0],
            [-0.5 * v1, 0.5, 0.0, 0.0],
            [-v2, 0.0, 1.0, 0.0],
            [-e + 0.5 * v1 * v1, -0.5 * v1, 0.0, 1.0],
        ];
        let mut db2 = z;
        db2[1][0] = lin(-0.5, &gv1, 0.0, &gv1);
        db2[2][0] = lin(-1.0, &gv2, 0.0, &gv2);
        db2[3][0] = lin(-1.0, &ge, v1, &gv1);
        db2[3][1] = lin(-0.5, &gv1, 0.0, &gv1);

        Ok(ViscosityMatrices2D {
            a1,
            a2,
            b1,
            b2,
            da1,
            da2,
            db1,
            db2,
        })
    }

    fn mirror(&self, w: &Vector<4>, axis: Axis) -> Vector<4> {
        match axis {
            Axis::X => [w[0], -w[1], w[2], w[3]],
            Axis::Y => [w[0], w[1], -w[2], w[3]],
        }
    }

    fn wall_node(&self, w: &Vector<4>, axis: Axis) -> Vector<4> {
        let k = if axis == Axis::X { 1 } else { 2 };
        let mut out = *w;
        out[3] -= 0.5 * w[k] * w[k] / w[0];
        out[k] = 0.0;
        out
    }
}
