use std::f64::consts::PI;

use hv_core::boundary::{Boundaries1D, Boundaries2D};
use hv_core::mesh::{Grid1D, Grid2D};
use hv_core::muscl::*;
use hv_core::physics::{Advection1D, Euler1D, Kpp, Model1D};
use hv_core::problems::quadrature::average;

fn total_variation(cells: &[[f64; 1]]) -> f64 {
    let n = cells.len();
    (0..n).map(|j| (cells[(j + 1) % n][0] - cells[j][0]).abs()).sum()
}

fn square_wave(grid: &Grid1D) -> Vec<[f64; 1]> {
    let f = |x: f64| [if (0.25..0.5).contains(&x) { 1.0 } else { 0.0 }];
    (0..grid.n)
        .map(|j| average(&f, grid.node(j), grid.node(j + 1), &[0.25, 0.5], 4))
        .collect()
}

#[test]
fn reconstruction_examples() {
    let (l, r) = muscl_reconstruct(Limiter::VanAlbada, &[2.0], &[2.0], &[2.0]);
    assert_eq!((l, r), ([2.0], [2.0]));
    let (l, r) = muscl_reconstruct(Limiter::Superbee, &[1.0], &[2.0], &[3.0]);
    assert_eq!((l, r), ([1.5], [2.5]));
    for lim in [Limiter::VanAlbada, Limiter::Superbee] {
        assert_eq!(limited_slope(lim, 1.0, -2.0), 0.0);
        assert_eq!(limited_slope(lim, 0.0, 1.0), 0.0);
    }
    assert_eq!(limited_slope(Limiter::Superbee, 1.0, 4.0), 2.0);
    assert_eq!(limited_slope(Limiter::VanAlbada, 1.0, 1.0), 1.0);
}

#[test]
fn rusanov_examples() {
    let m = Advection1D { speed: 2.0 };
    let f = |w: &[f64; 1]| m.flux(w);
    let s = |w: &[f64; 1]| m.max_speed(w);
    assert_eq!(rusanov_flux(f, s, &[3.0], &[3.0]).unwrap(), [6.0]);
    // Positive speed: pure upwind.
    assert_eq!(rusanov_flux(f, s, &[1.0], &[5.0]).unwrap(), [2.0]);
    let e = Euler1D::new(1.4);
    let (l, r) = (e.conservative(1.0, 0.5, 1.0), e.conservative(1.0, -0.5, 1.0));
    let fr = rusanov_flux(|w| e.flux(w), |w| e.max_speed(w), &l, &r).unwrap();
    let a = e.max_speed(&l).unwrap();
    assert!((fr[1] - (e.flux(&l).unwrap()[1] - 0.5 * a * (r[1] - l[1]))).abs() < 1e-14);
}

#[test]
fn roe_examples() {
    let e = Euler1D::new(1.4);
    let w = e.conservative(0.7, 0.2, 1.3);
    let f = e.roe_flux(&w, &w).unwrap();
    let exact = e.flux(&w).unwrap();
    for k in 0..3 {
        assert!((f[k] - exact[k]).abs() < 1e-14);
    }
    let (l, r) = (e.conservative(1.0, 0.0, 1.0), e.conservative(0.125, 0.0, 0.1));
    let f = e.roe_flux(&l, &r).unwrap();
    assert!(f.iter().all(|x| x.is_finite()));
    // Mass moves right across the Sod jump.
    assert!(f[0] > 0.0 && f[2] > 0.0);
    assert_eq!(Advection1D { speed: 1.0 }.roe_flux(&[0.5], &[1.0]).unwrap(), [0.5]);
}

#[test]
fn constant_state_unchanged() {
    let g = Grid1D::new(0.0, 1.0, 20, true).unwrap();
    let e = Euler1D::new(1.4);
    let w = e.conservative(1.0, 0.3, 2.0);
    let mut s = Muscl1D::new(
        e,
        g,
        Boundaries1D::periodic(),
        Limiter::VanAlbada,
        NumericalFlux::Roe,
        0.4,
        vec![w; 20],
    )
    .unwrap();
    s.run(0.2).unwrap();
    for c in &s.cells {
        for k in 0..3 {
            assert!((c[k] - w[k]).abs() < 1e-13);
        }
    }
}

#[test]
fn tvd_and_conservative() {
    for lim in [Limiter::VanAlbada, Limiter::Superbee] {
        let g = Grid1D::new(0.0, 1.0, 100, true).unwrap();
        let u0 = square_wave(&g);
        let mass0: f64 = u0.iter().map(|w| w[0]).sum();
        let mut s = Muscl1D::new(
            Advection1D { speed: 1.0 },
            g,
            Boundaries1D::periodic(),
            lim,
            NumericalFlux::Rusanov,
            MUSCL_DEFAULT_CFL,
            u0,
        )
        .unwrap();
        let mut tv = total_variation(&s.cells);
        while s.t < 1.0 {
            s.step(1.0).unwrap();
            let next = total_variation(&s.cells);
            assert!(next <= tv + 1e-12, "{lim:?}: TV grew {tv} -> {next}");
            tv = next;
            let mass: f64 = s.cells.iter().map(|w| w[0]).sum();
            assert!((mass - mass0).abs() < 1e-12);
        }
        assert!(s.cells.iter().all(|w| w[0] >= -1e-12 && w[0] <= 1.0 + 1e-12));
    }
}

#[test]
fn second_order_on_smooth_advection() {
    let err = |n: usize| {
        let g = Grid1D::new(0.0, 1.0, n, true).unwrap();
        let f = |x: f64| [(2.0 * PI * x).sin()];
        let u0: Vec<[f64; 1]> = (0..n).map(|j| average(&f, g.node(j), g.node(j + 1), &[], 1)).collect();
        let mut s = Muscl1D::new(
            Advection1D { speed: 1.0 },
            g,
            Boundaries1D::periodic(),
            Limiter::VanAlbada,
            NumericalFlux::Rusanov,
            0.4,
            u0.clone(),
        )
        .unwrap();
        s.run(1.0).unwrap();
        s.cells.iter().zip(&u0).map(|(a, b)| (a[0] - b[0]).abs()).sum::<f64>() / n as f64
    };
    let slope = (err(80) / err(320)).log2() / 2.0;
    assert!((slope - 2.0).abs() <= 0.3, "slope {slope}");
}

#[test]
fn two_d_conserves_on_periodic_kpp_data() {
    let g = Grid2D::new(
        Grid1D::new(0.0, 1.0, 16, true).unwrap(),
        Grid1D::new(0.0, 1.0, 16, true).unwrap(),
    );
    let cells: Vec<[f64; 1]> = (0..256)
        .map(|k| [if (k % 16) < 8 && k / 16 < 8 { 3.5 * PI } else { PI / 4.0 }])
        .collect();
    let total0: f64 = cells.iter().map(|w| w[0]).sum();
    let mut s = Muscl2D::new(Kpp, g, Boundaries2D::periodic(), Limiter::Superbee, 0.4, cells).unwrap();
    s.run(0.1).unwrap();
    let total: f64 = s.cells.iter().map(|w| w[0]).sum();
    assert!((total - total0).abs() < 1e-10 * total0);
    assert!(Muscl2D::new(
        Kpp,
        s.grid,
        Boundaries2D::periodic(),
        Limiter::Superbee,
        1.5,
        s.cells.clone()
    )
    .is_err());
}
