use hv_core::problems::riemann::*;
use hv_core::problems::{sod_solution, SOD_LEFT, SOD_RIGHT};

fn conserved(s: Primitive, g: f64) -> [f64; 3] {
    [s.rho, s.rho * s.v, s.p / (g - 1.0) + 0.5 * s.rho * s.v * s.v]
}

fn flux(s: Primitive, g: f64) -> [f64; 3] {
    let e = conserved(s, g)[2];
    [s.rho * s.v, s.rho * s.v * s.v + s.p, s.v * (e + s.p)]
}

#[test]
fn sod_star_state() {
    let s = sod_solution();
    assert!((s.p_star - 0.30313).abs() < 1e-5, "p* = {}", s.p_star);
    assert!((s.v_star - 0.92745).abs() < 1e-5, "v* = {}", s.v_star);
}

#[test]
fn sod_shock_satisfies_rankine_hugoniot() {
    let s = sod_solution();
    let g = s.gamma;
    let speed = s.right_shock_speed().unwrap();
    let (behind, ahead) = (s.sample(speed - 1e-9), s.sample(speed + 1e-9));
    assert_eq!(ahead, SOD_RIGHT);
    let (wl, wr) = (conserved(behind, g), conserved(ahead, g));
    let (fl, fr) = (flux(behind, g), flux(ahead, g));
    for k in 0..3 {
        let jump = fr[k] - fl[k] - speed * (wr[k] - wl[k]);
        assert!(jump.abs() < 1e-9, "component {k}: {jump:e}");
    }
}

#[test]
fn far_field_returns_input_states() {
    let s = sod_solution();
    assert_eq!(s.sample(-10.0), SOD_LEFT);
    assert_eq!(s.sample(10.0), SOD_RIGHT);
    let w = s.wave_speeds();
    assert!(w.windows(2).all(|p| p[0] <= p[1]));
    // Rarefaction head, tail, contact, shock.
    assert_eq!(w.len(), 4);
    assert!((w[0] + 1.4_f64.sqrt()).abs() < 1e-14);
}

#[test]
fn equal_states_are_constant() {
    let a = Primitive::new(0.7, 0.3, 1.1);
    for xi in [-3.0, -0.1, 0.0, 0.3, 5.0] {
        let s = exact_riemann(a, a, 1.4, xi).unwrap();
        assert!((s.rho - a.rho).abs() < 1e-12 && (s.v - a.v).abs() < 1e-12 && (s.p - a.p).abs() < 1e-12);
    }
}

#[test]
fn symmetric_collision_has_zero_star_velocity() {
    let s = solve_riemann(Primitive::new(1.0, 0.8, 1.0), Primitive::new(1.0, -0.8, 1.0), 1.4).unwrap();
    assert!(s.v_star.abs() < 1e-12);
    assert!(s.p_star > 1.0);
    assert!(s.sample(0.0).rho > 1.0);
}

#[test]
fn rejects_vacuum_and_unphysical_data() {
    assert!(solve_riemann(Primitive::new(1.0, -10.0, 0.1), Primitive::new(1.0, 10.0, 0.1), 1.4).is_err());
    assert!(solve_riemann(Primitive::new(-1.0, 0.0, 1.0), SOD_RIGHT, 1.4).is_err());
}
