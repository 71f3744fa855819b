//! Fourth-order hybrid-variable (HV) finite volume / finite difference solvers.
//!
//! The unknowns are nodal point values together with cell averages. Cell averages
//! evolve in conservation form, nodal values by characteristic-upwinded derivative
//! operators, and a residual-driven artificial viscosity switches on near
//! discontinuities only.
//!
//! Layout:
//! - [`mesh`]: grids and hybrid field containers
//! - [`physics`]: equation models (scalar advection, KPP, Euler)
//! - [`ddo`]: discrete differential operators and edge reconstructions
//! - [`boundary`]: boundary policies and ghost states
//! - [`rhs1d`], [`rhs2d`]: semi-discrete right-hand sides
//! - [`viscosity`]: entropy residual, indicator and viscosity coefficients
//! - [`time`]: RK4, CFL control, initial sampling
//! - [`solver`]: step drivers tying the above together
//! - [`analysis`]: Fourier analysis and operator spectra
//! - [`muscl`]: second-order MUSCL baseline
//! - [`problems`]: benchmark catalog, exact Riemann solver, reference runs
//! - [`harness`]: configuration, error norms, convergence studies, file output

pub mod analysis;
pub mod boundary;
pub mod ddo;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod muscl;
pub mod physics;
pub mod problems;
pub mod rhs1d;
pub mod rhs2d;
pub mod solver;
pub mod time;
pub mod viscosity;

pub use error::{Error, PhysicsError, Result};
