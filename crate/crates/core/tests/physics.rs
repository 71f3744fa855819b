use hv_core::linalg::{contract, matmul, Matrix, Tensor, Vector};
use hv_core::physics::*;
use hv_core::PhysicsError;
use proptest::prelude::*;

const G: f64 = 1.4;

/// Central-difference Jacobian of `f`.
fn fd_jacobian<const N: usize>(f: impl Fn(&Vector<N>) -> Vector<N>, w: &Vector<N>) -> Matrix<N> {
    let mut j = [[0.0; N]; N];
    for c in 0..N {
        let eps = 1e-6 * w[c].abs().max(1.0);
        let mut p = *w;
        let mut m = *w;
        p[c] += eps;
        m[c] -= eps;
        let (fp, fm) = (f(&p), f(&m));
        for r in 0..N {
            j[r][c] = (fp[r] - fm[r]) / (2.0 * eps);
        }
    }
    j
}

fn reassemble<const N: usize>(es: &Eigensystem<N>) -> Matrix<N> {
    let mut ld = es.left;
    for (r, row) in ld.iter_mut().enumerate() {
        for x in row.iter_mut() {
            *x *= es.eigenvalues[r];
        }
    }
    matmul(&es.right, &ld)
}

fn rel_diff<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> f64 {
    let scale = b.iter().flatten().fold(1.0_f64, |m, x| m.max(x.abs()));
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

fn identity_err<const N: usize>(es: &Eigensystem<N>) -> f64 {
    let p = matmul(&es.right, &es.left);
    let mut e = 0.0_f64;
    for (r, row) in p.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            e = e.max((x - if r == c { 1.0 } else { 0.0 }).abs());
        }
    }
    e
}

/// Max over `c` of the finite-difference check `T : e_c` against `dA/dW_c`.
fn tensor_fd_err<const N: usize>(a: impl Fn(&Vector<N>) -> Matrix<N>, t: &Tensor<N>, w: &Vector<N>) -> f64 {
    let mut worst = 0.0_f64;
    for c in 0..N {
        let eps = 1e-6;
        let mut d = [0.0; N];
        d[c] = 1.0;
        let mut p = *w;
        let mut m = *w;
        p[c] += eps;
        m[c] -= eps;
        let (ap, am) = (a(&p), a(&m));
        let tc = contract(t, &d);
        for r in 0..N {
            for k in 0..N {
                worst = worst.max(((ap[r][k] - am[r][k]) / (2.0 * eps) - tc[r][k]).abs());
            }
        }
    }
    worst
}

#[test]
fn euler_flux_examples() {
    let m = Euler1D::new(G);
    assert_eq!(m.flux(&m.conservative(1.0, 0.0, 1.0)).unwrap(), [0.0, 1.0, 0.0]);
    let f = m.flux(&m.conservative(1.0, 1.0, 1.0)).unwrap();
    for (a, b) in f.iter().zip([1.0, 2.0, 4.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    assert!(matches!(m.flux(&[-1.0, 0.0, 1.0]), Err(PhysicsError::Density(_))));
    assert!(matches!(m.flux(&[1.0, 0.0, -1.0]), Err(PhysicsError::Pressure(_))));
}

#[test]
fn euler_eigenvalues() {
    let m = Euler1D::new(G);
    let es = m.eigensystem(&m.conservative(1.0, 0.0, 1.0)).unwrap();
    let c = 1.4_f64.sqrt();
    for (a, b) in es.eigenvalues.iter().zip([-c, 0.0, c]) {
        assert!((a - b).abs() < 1e-14);
    }
    let es = m.eigensystem(&m.conservative(1.4, 0.0, 1.0)).unwrap();
    for (a, b) in es.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    assert!(identity_err(&es) < 1e-12);
}

#[test]
fn max_speed_examples() {
    let m = Euler1D::new(G);
    assert!((m.max_speed(&m.conservative(1.4, 0.0, 1.0)).unwrap() - 1.0).abs() < 1e-14);
    assert!((m.max_speed(&m.conservative(1.0, -2.0, 1.0)).unwrap() - 3.183215956619923).abs() < 1e-12);
    assert_eq!(Advection1D { speed: 1.0 }.max_speed(&[3.0]).unwrap(), 1.0);
    let m2 = Euler2D::new(G);
    let w = m2.conservative(1.4, 3.0, 4.0, 1.0);
    assert!((m2.max_speed(&w).unwrap() - 6.0).abs() < 1e-13);
}

#[test]
fn entropy_examples() {
    let m = Euler1D::new(G);
    let e = m.entropy(&m.conservative(1.0, 0.0, 1.0)).unwrap();
    assert!((e.s - 1.0).abs() < 1e-14 && (e.big_s - 1.0).abs() < 1e-14);
    let e = m.entropy(&m.conservative(0.125, 0.0, 0.1)).unwrap();
    assert!((e.s - 0.1 / 0.125_f64.powf(1.4)).abs() < 1e-12);
    assert!((e.s - 1.8379173679952556).abs() < 1e-12);
    let e = Advection1D { speed: 1.0 }.entropy(&[3.0]).unwrap();
    assert_eq!((e.s, e.big_s), (4.5, 4.5));
    let e = Kpp.entropy(&[2.0]).unwrap();
    assert_eq!((e.s, e.big_s), (2.0, 2.0));
}

#[test]
fn kpp_examples() {
    assert_eq!(kpp_flux(0.0), (0.0, 1.0));
    assert_eq!(kpp_velocity(0.0), (1.0, -0.0));
    let (f, g) = kpp_flux(std::f64::consts::FRAC_PI_2);
    assert!((f - 1.0).abs() < 1e-15 && g.abs() < 1e-15);
    let (vx, vy) = kpp_velocity(std::f64::consts::FRAC_PI_2);
    assert!(vx.abs() < 1e-15 && (vy + 1.0).abs() < 1e-15);
    let (f, g) = kpp_flux(std::f64::consts::FRAC_PI_4);
    assert!((f - 0.5_f64.sqrt()).abs() < 1e-15 && (g - 0.5_f64.sqrt()).abs() < 1e-15);
    let es = Kpp.eigensystem(&[0.3], Axis::X).unwrap();
    assert_eq!(es.right, [[1.0]]);
    assert!((es.eigenvalues[0] - 0.3_f64.cos()).abs() < 1e-15);
}

#[test]
fn viscosity_matrix_1d() {
    let m = Euler1D::new(G);
    // rho = 1, v = 2, E = 3
    let (a, t) = m.viscosity_matrix(&[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(a, [[1.0, 0.0, 0.0], [-2.0, 1.0, 0.0], [-3.0, 0.0, 1.0]]);
    let w = [1.3, -0.4, 2.9];
    let (_, t2) = m.viscosity_matrix(&w).unwrap();
    let err = tensor_fd_err(|w| m.viscosity_matrix(w).unwrap().0, &t2, &w);
    assert!(err < 1e-8, "{err}");
    assert_eq!(t[0], [[0.0; 3]; 3]);
    assert!(m.viscosity_matrix(&[0.0, 0.0, 1.0]).is_err());
}

#[test]
fn viscosity_matrices_2d() {
    let m = Euler2D::new(G);
    let vm = m.viscosity_matrices(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(
        vm.a1,
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.0, 0.0, 0.0, 1.0]
        ]
    );
    let vm = m.viscosity_matrices(&[1.0, 1.0, 2.0, 5.0]).unwrap();
    assert_eq!(vm.a2[2], [-0.5, 0.5, 0.0, 0.0]);

    let w = m.conservative(1.0, 0.3, -0.4, 2.0);
    let vm = m.viscosity_matrices(&w).unwrap();
    let get = |k: usize| {
        move |w: &Vector<4>| {
            let v = m.viscosity_matrices(w).unwrap();
            [v.a1, v.a2, v.b1, v.b2][k]
        }
    };
    for (k, t) in [vm.da1, vm.da2, vm.db1, vm.db2].iter().enumerate() {
        let err = tensor_fd_err(get(k), t, &w);
        assert!(err < 1e-8, "tensor {k}: {err}");
    }

    // With v2 = 0, A1 on (rho, rho v1, rho E) is the 1D matrix.
    let w2 = m.conservative(1.2, 0.7, 0.0, 1.5);
    let a1 = m.viscosity_matrices(&w2).unwrap().a1;
    let (a, _) = Euler1D::new(G).viscosity_matrix(&[w2[0], w2[1], w2[3]]).unwrap();
    let idx = [0, 1, 3];
    for r in 0..3 {
        for c in 0..3 {
            assert!((a1[idx[r]][idx[c]] - a[r][c]).abs() < 1e-14);
        }
    }
}

#[test]
fn entropy_gradient_matches_fd() {
    let m = Euler2D::new(G);
    let w = m.conservative(0.8, 0.3, -0.2, 1.1);
    let g = m.entropy_gradient(&w).unwrap();
    for c in 0..4 {
        let eps = 1e-6;
        let mut p = w;
        let mut q = w;
        p[c] += eps;
        q[c] -= eps;
        let d = (m.entropy(&p).unwrap().s - m.entropy(&q).unwrap().s) / (2.0 * eps);
        assert!((d - g[c]).abs() < 1e-7, "component {c}: {d} vs {}", g[c]);
    }
}

fn euler1d_state() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..5.0, -3.0f64..3.0, 0.05f64..5.0)
}

fn euler2d_state() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.05f64..5.0, -3.0f64..3.0, -3.0f64..3.0, 0.05f64..5.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn euler1d_eigensystem_matches_jacobian((rho, v, p) in euler1d_state()) {
        let m = Euler1D::new(G);
        let w = m.conservative(rho, v, p);
        let es = m.eigensystem(&w).unwrap();
        let fd = fd_jacobian(|w| m.flux(w).unwrap(), &w);
        prop_assert!(rel_diff(&reassemble(&es), &fd) < 1e-6);
        prop_assert!(identity_err(&es) < 1e-10);
        prop_assert!(es.eigenvalues[0] < es.eigenvalues[1] && es.eigenvalues[1] < es.eigenvalues[2]);
    }

    #[test]
    fn euler2d_eigensystem_matches_jacobian((rho, v1, v2, p) in euler2d_state()) {
        let m = Euler2D::new(G);
        let w = m.conservative(rho, v1, v2, p);
        for axis in [Axis::X, Axis::Y] {
            let es = m.eigensystem(&w, axis).unwrap();
            let fd = fd_jacobian(|w| m.flux(w, axis).unwrap(), &w);
            prop_assert!(rel_diff(&reassemble(&es), &fd) < 1e-6);
            prop_assert!(identity_err(&es) < 1e-10);
            prop_assert!(es.eigenvalues.windows(2).all(|p| p[0] <= p[1]));
        }
    }

    #[test]
    fn primitive_round_trip((rho, v, p) in euler1d_state()) {
        let m = Euler1D::new(G);
        let w = m.conservative(rho, v, p);
        let [r2, v2, p2] = m.primitive(&w).unwrap();
        let w2 = m.conservative(r2, v2, p2);
        for k in 0..3 {
            prop_assert!((w[k] - w2[k]).abs() <= 1e-14 * w[k].abs().max(1.0));
        }
        let s = EulerState1D::from_vector(&w);
        prop_assert_eq!(s.to_vector(), w);
    }

    #[test]
    fn kpp_eigensystem_is_velocity(w in -10.0f64..10.0) {
        let (vx, vy) = kpp_velocity(w);
        prop_assert!((Kpp.eigensystem(&[w], Axis::X).unwrap().eigenvalues[0] - vx).abs() < 1e-15);
        prop_assert!((Kpp.eigensystem(&[w], Axis::Y).unwrap().eigenvalues[0] - vy).abs() < 1e-15);
    }
}
