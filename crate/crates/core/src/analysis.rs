//! Fourier analysis of the semi-discrete scheme for `w_t + λ w_x = 0` and
//! spectra of the assembled operator with periodic or inflow/outflow ends.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ddo::{ddo_boundary_left, upwind_right};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Roots of the characteristic quadratic at phase `theta = κh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharRoots {
    pub theta: f64,
    /// The physical root, `≈ iθ` for small θ.
    pub mu1: Complex64,
    pub mu2: Complex64,
}

/// Coefficients `(b, c)` of `μ² − bμ + c`.
fn char_coefficients(theta: f64) -> (Complex64, Complex64) {
    let em = Complex64::from_polar(1.0, -theta);
    let ep = Complex64::from_polar(1.0, theta);
    (2.0 + em, 4.0 - 3.5 * em - 0.5 * ep)
}

pub fn char_polynomial(theta: f64, mu: Complex64) -> Complex64 {
    let (b, c) = char_coefficients(theta);
    mu * mu - b * mu + c
}

pub fn char_roots(theta: f64) -> CharRoots {
    let (b, c) = char_coefficients(theta);
    let disc = (b * b - 4.0 * c).sqrt();
    let r1 = 0.5 * (b + disc);
    let r2 = 0.5 * (b - disc);
    let target = I * theta;
    let (mu1, mu2) = if (r1 - target).norm() <= (r2 - target).norm() {
        (r1, r2)
    } else {
        (r2, r1)
    };
    CharRoots { theta, mu1, mu2 }
}

/// `(Ā, A)` at `tau = λt/h` for the simple wave `e^{iκx}` with `θ = κh`.
pub fn amplification(theta: f64, tau: f64) -> (Complex64, Complex64) {
    if theta == 0.0 {
        return (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    }
    let CharRoots { mu1, mu2, .. } = char_roots(theta);
    let it = I * theta;
    let dm = mu2 - mu1;
    let e1 = (-mu1 * tau).exp();
    let e2 = (-mu2 * tau).exp();
    let a_bar = (mu2 - it) / dm * e1 + (it - mu1) / dm * e2;
    let a = mu1 * (mu2 - it) / (it * dm) * e1 + mu2 * (it - mu1) / (it * dm) * e2;
    (a_bar, a)
}

/// `(θ, μ1, μ2)` over `n` uniform phases in `[0, 2π)`.
pub fn char_root_sweep(n: usize) -> Vec<CharRoots> {
    (0..n)
        .map(|k| char_roots(2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisBc {
    Periodic,
    /// `w_t − w_x = 0` on `[0, 1]` with homogeneous data at `x = 1`.
    Ibvp,
}

/// Dense `D` with `U' = D U / h` for `w_t − w_x = 0`, unknowns ordered as cell
/// averages `0..N` then nodes `0..N`. With inflow at `x = 1` the inflow node is
/// eliminated and node 0 uses the one-sided boundary operator.
pub fn assemble_operator(n: usize, bc: AnalysisBc) -> Result<DMatrix<f64>> {
    if n < 4 {
        return Err(Error::Config(format!("operator size N = {n} must be at least 4")));
    }
    let mut d = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let cell = |j: usize| j;
    let node = |j: usize| n + j;
    let periodic = bc == AnalysisBc::Periodic;
    // Index of node j+1 / cell j-1 etc., or None where homogeneous data applies.
    let node_at = |j: usize| -> Option<usize> {
        if j < n {
            Some(node(j))
        } else if periodic {
            Some(node(j - n))
        } else {
            None
        }
    };
    // λ = −1: cell' = (w_{j+1} − w_j)/h.
    for j in 0..n {
        d[(cell(j), node(j))] -= 1.0;
        if let Some(c) = node_at(j + 1) {
            d[(cell(j), c)] += 1.0;
        }
    }
    // Node' = −λ D⁺w = D⁺w with weights on (w̄_{j−1/2}, w_j, w̄_{j+1/2}, w_{j+1}).
    let [a, b, c, e] = [
        upwind_right(1.0, 0.0, 0.0, 0.0),
        upwind_right(0.0, 1.0, 0.0, 0.0),
        upwind_right(0.0, 0.0, 1.0, 0.0),
        upwind_right(0.0, 0.0, 0.0, 1.0),
    ];
    let bd = [
        ddo_boundary_left(1.0, 0.0, 0.0, 1.0),
        ddo_boundary_left(0.0, 1.0, 0.0, 1.0),
        ddo_boundary_left(0.0, 0.0, 1.0, 1.0),
    ];
    for j in 0..n {
        let r = node(j);
        if j == 0 && !periodic {
            d[(r, node(0))] += bd[0];
            d[(r, cell(0))] += bd[1];
            d[(r, node(1))] += bd[2];
            continue;
        }
        let left_cell = if j == 0 { n - 1 } else { j - 1 };
        d[(r, cell(left_cell))] += a;
        d[(r, node(j))] += b;
        d[(r, cell(j))] += c;
        if let Some(col) = node_at(j + 1) {
            d[(r, col)] += e;
        }
    }
    Ok(d)
}

/// All eigenvalues of a real dense matrix.
pub fn spectrum(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-14, 10_000)
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Symbol-side prediction of the periodic spectrum: `{−μ1, −μ2}` at `θ_k = 2πk/N`.
pub fn periodic_symbol_spectrum(n: usize) -> Vec<Complex64> {
    char_root_sweep(n).iter().flat_map(|r| [-r.mu1, -r.mu2]).collect()
}

/// Symmetric Hausdorff distance between two point sets in the complex plane.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |p: &[Complex64], q: &[Complex64]| {
        p.iter()
            .map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_at_zero_and_pi() {
        let r = char_roots(0.0);
        assert!(r.mu1.norm() < 1e-14);
        assert!((r.mu2 - 3.0).norm() < 1e-14);
        let r = char_roots(std::f64::consts::PI);
        assert!(((r.mu1 - r.mu2).norm() - 31.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn amplification_at_t0() {
        let (ab, a) = amplification(0.7, 0.0);
        assert!((ab - 1.0).norm() < 1e-14 && (a - 1.0).norm() < 1e-14);
    }
}
