use std::f64::consts::PI;

use hv_core::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use hv_core::physics::{Advection1D, Advection2D, EntropyPair, Euler1D, Euler2D};
use hv_core::problems::{sod, taylor_green, taylor_green_primitive};
use hv_core::time::{sample_initial_1d, sample_initial_2d};
use hv_core::viscosity::*;

fn advected(grid: &Grid1D, t: f64) -> HybridField1D<1> {
    sample_initial_1d(|x| [2.0 + (2.0 * PI * (x - t)).sin()], grid)
}

#[test]
fn constant_state_has_zero_residual() {
    let g = Grid1D::new(0.0, 1.0, 20, true).unwrap();
    let m = Euler1D::new(1.4);
    let w = m.conservative(1.0, 0.5, 1.0);
    let mut f = HybridField1D::zeros(&g);
    f.nodal.iter_mut().chain(f.cells.iter_mut()).for_each(|x| *x = w);
    let mut h = ResidualHistory::new();
    for n in 0..3 {
        let r = cellular_residual_1d(&h, &f, &m, &g, 0.1 * n as f64).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-14));
        let v = viscosity_1d(&mut h, &f, &m, &g, 0.1 * n as f64, DEFAULT_Z0).unwrap();
        assert!(v.nu_cell.iter().all(|x| *x == 0.0));
    }
}

#[test]
fn first_step_residual_is_the_spatial_slope() {
    // s = w^2/2 = 1 + x is linear, speed 1.
    let g = Grid1D::new(0.0, 1.0, 10, false).unwrap();
    let f = sample_initial_1d(|x| [(2.0 * (1.0 + x)).sqrt()], &g);
    let r = cellular_residual_1d(&ResidualHistory::new(), &f, &Advection1D { speed: 1.0 }, &g, 0.0).unwrap();
    assert!(r.iter().all(|x| (x - 1.0).abs() < 1e-12), "{r:?}");
}

/// Max residual and raw indicator after two history levels on an exact
/// advected solution.
fn smooth_residual(n: usize) -> (f64, f64) {
    let g = Grid1D::new(0.0, 1.0, n, true).unwrap();
    let m = Advection1D { speed: 1.0 };
    let dt = 0.5 / n as f64;
    let mut h = ResidualHistory::new();
    for k in 0..2 {
        let t = k as f64 * dt;
        viscosity_1d(&mut h, &advected(&g, t), &m, &g, t, DEFAULT_Z0).unwrap();
    }
    let (t, f) = (2.0 * dt, advected(&g, 2.0 * dt));
    let r = cellular_residual_1d(&h, &f, &m, &g, t).unwrap();
    let v = viscosity_1d(&mut h, &f, &m, &g, t, DEFAULT_Z0).unwrap();
    let max = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (max(&r), max(&v.z_raw))
}

#[test]
fn smooth_residual_second_order_and_indicator_third() {
    let (r1, z1) = smooth_residual(40);
    let (r2, z2) = smooth_residual(80);
    let res_order = (r1 / r2).log2();
    let z_order = (z1 / z2).log2();
    assert!((res_order - 2.0).abs() < 0.3, "residual order {res_order}");
    assert!((z_order - 3.0).abs() < 0.3, "indicator order {z_order}");
}

#[test]
fn indicator_guard() {
    let stats = global_stats(
        &[(EntropyPair { s: 1.0, big_s: 1.0 }, 1.0)],
        &[(EntropyPair { s: 1.0, big_s: 1.0 }, 1.0)],
    );
    assert_eq!((stats.delta_s, stats.delta_big_s, stats.s_bar), (0.0, 0.0, 1.0));
    let z = indicator(&[2.0], &stats, &[4.0], &[0.1]);
    assert!((z[0] - 0.1 * 2.0 / (4.0 * EPSILON)).abs() / z[0] < 1e-12);
    assert_eq!(indicator(&[0.0], &stats, &[4.0], &[0.1]), vec![0.0]);
}

#[test]
fn saturated_indicator_gives_von_neumann_richtmyer() {
    let g = Grid1D::new(-0.5, 0.5, 40, false).unwrap();
    let p = sod();
    let f = p.initial_state(&g);
    let act = smooth_1d(&vec![sharpen(0.5, DEFAULT_Z0); g.n], false);
    assert!(act.iter().all(|a| *a == 1.0));
    let v = assemble_viscosity_1d(&f, &act, &p.model, &g).unwrap();
    for (nu, w) in v.nu_cell.iter().zip(&f.cells) {
        let c = p.model.sound_speed(w).unwrap() + (w[1] / w[0]).abs();
        assert!((nu - g.h * c / 4.0).abs() < 1e-15);
    }
    // Boundary nodes take the nearest cell.
    assert_eq!(v.nu_node[0], v.nu_cell[0]);
    assert_eq!(v.nu_node[g.n], v.nu_cell[g.n - 1]);
}

#[test]
fn activation_stays_in_unit_interval() {
    let p = sod();
    let g = p.grid(80).unwrap();
    let f = p.initial_state(&g);
    let mut h = ResidualHistory::new();
    viscosity_1d(&mut h, &f, &p.model, &g, 0.0, DEFAULT_Z0).unwrap();
    // A perturbed second level makes the time term active.
    let mut f2 = f.clone();
    f2.cells[40][0] += 0.05;
    let v = viscosity_1d(&mut h, &f2, &p.model, &g, 0.01, DEFAULT_Z0).unwrap();
    assert!(v.z_activated.iter().all(|a| (0.0..=1.0).contains(a)));
    let (arg, peak) = v
        .z_activated
        .iter()
        .enumerate()
        .fold((0, 0.0), |a, (k, z)| if *z > a.1 { (k, *z) } else { a });
    assert!(peak > 0.9 && arg.abs_diff(40) <= 2, "peak {peak} at {arg}");
}

#[test]
fn smoothing_is_monotone_and_preserves_constants() {
    let z = vec![0.0, 0.2, 0.9, 0.1, 0.0, 0.0, 0.4, 0.0];
    let mut bigger = z.clone();
    bigger[4] = 0.3;
    let (a, b) = (smooth_1d(&z, true), smooth_1d(&bigger, true));
    assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
    assert!(smooth_1d(&[0.7; 6], false).iter().all(|x| (x - 0.7).abs() < 1e-15));
    let s2 = smooth_2d(&[0.25; 20], 5, 4, true, false);
    assert!(s2.iter().all(|x| (x - 0.25).abs() < 1e-15));
}

#[test]
fn residual_2d_reduces_to_1d() {
    let gx = Grid1D::new(0.0, 1.0, 16, true).unwrap();
    let g2 = Grid2D::new(gx, Grid1D::new(0.0, 1.0, 5, true).unwrap());
    let f1 = sample_initial_1d(|x| [1.0 + 0.5 * (2.0 * PI * x).sin()], &gx);
    let f2: HybridField2D<1> = sample_initial_2d(|x, _| [1.0 + 0.5 * (2.0 * PI * x).sin()], &g2);
    let r1 = cellular_residual_1d(&ResidualHistory::new(), &f1, &Advection1D { speed: 0.7 }, &gx, 0.0).unwrap();
    let r2 = cellular_residual_2d(
        &ResidualHistory::new(),
        &f2,
        &Advection2D { ax: 0.7, ay: 0.0 },
        &g2,
        0.0,
        None,
    )
    .unwrap();
    for j in 0..5 {
        for i in 0..16 {
            assert!((r2[j * 16 + i] - r1[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn taylor_green_residual_second_order() {
    let p = taylor_green();
    let m = Euler2D::new(5.0 / 3.0);
    let res = |n: usize| {
        let g = p.grid(n, n).unwrap();
        let f = sample_initial_2d(
            |x, y| {
                let [r, u, v, pr] = taylor_green_primitive(x, y);
                m.conservative(r, u, v, pr)
            },
            &g,
        );
        // Steady state: a history equal to the current field zeroes the time term.
        let mut h = ResidualHistory::new();
        let s: Vec<f64> = f
            .cells
            .iter()
            .map(|w| hv_core::physics::Model2D::entropy(&m, w).unwrap().s)
            .collect();
        h.push(-2e-3, s.clone());
        h.push(-1e-3, s);
        let r = cellular_residual_2d(&h, &f, &m, &g, 0.0, p.source.as_deref()).unwrap();
        r.iter().map(|x| x.abs()).fold(0.0, f64::max)
    };
    let order = (res(20) / res(40)).log2();
    assert!(order > 1.7, "order {order}");
}

#[test]
fn directional_length_cases() {
    assert_eq!(directional_length(0.1, 0.2, [1.0, 0.0]), 0.1);
    assert!((directional_length(0.1, 0.2, [0.0, -3.0]) - 0.2).abs() < 1e-15);
    assert_eq!(directional_length(0.1, 0.2, [0.0, 0.0]), 0.1);
    let d = directional_length(0.1, 0.1, [1.0, 1.0]);
    assert!((d - 0.1 * 2.0_f64.sqrt()).abs() < 1e-15);
}
