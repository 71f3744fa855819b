use std::f64::consts::PI;

use hv_core::analysis::*;
use hv_core::harness::analysis_io::{export_spectra, superconvergence_orders, superconvergence_study};
use num_complex::Complex64;

fn lemma_poly(theta: f64) -> f64 {
    let x = theta.cos();
    425.0 - 456.0 * x + 96.0 * x * x + 16.0 * x * x * x
}

#[test]
fn root_sweep_lemmas() {
    let sweep = char_root_sweep(10_000);
    assert_eq!(sweep.len(), 10_000);
    for r in &sweep {
        let gap = (r.mu1 - r.mu2).norm();
        assert!(gap >= 3.0 - 1e-12, "θ = {}: gap {gap}", r.theta);
        assert!(r.mu1.re >= -1e-12 && r.mu2.re >= -1e-12, "θ = {}", r.theta);
        assert!((gap.powi(4) - lemma_poly(r.theta)).abs() <= 1e-10 * lemma_poly(r.theta).max(1.0));
        assert!(char_polynomial(r.theta, r.mu1).norm() < 1e-12);
        assert!(char_polynomial(r.theta, r.mu2).norm() < 1e-12);
    }
}

#[test]
fn pi_root_pair() {
    let r = char_roots(PI);
    let expect = [
        Complex64::new(0.5, 31.0_f64.sqrt() / 2.0),
        Complex64::new(0.5, -31.0_f64.sqrt() / 2.0),
    ];
    for mu in [r.mu1, r.mu2] {
        assert!(expect.iter().any(|e| (mu - e).norm() < 1e-12), "{mu}");
    }
}

#[test]
fn physical_root_tracks_i_theta() {
    for theta in [0.01, 0.05, 0.1] {
        let r = char_roots(theta);
        assert!((r.mu1 - Complex64::new(0.0, theta)).norm() < theta.powi(3));
    }
}

#[test]
fn amplification_superconverges() {
    // |Ā − e^{−iθτ}| with τ = λt/h fixed in time, i.e. t fixed and h halved.
    let t = 1.0;
    let err = |theta: f64| {
        let tau = t / theta; // κ = 1
        let (ab, _) = amplification(theta, tau);
        (ab - Complex64::from_polar(1.0, -theta * tau)).norm()
    };
    let slope = (err(0.1) / err(0.05)).log2();
    assert!((slope - 4.0).abs() < 0.3, "slope {slope}");
    let (ab, a) = amplification(0.0, 3.0);
    assert_eq!((ab, a), (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
}

#[test]
fn operator_structure() {
    let n = 12;
    let d = assemble_operator(n, AnalysisBc::Periodic).unwrap();
    for j in 0..n {
        let nonzero: Vec<f64> = (n..2 * n).map(|c| d[(j, c)]).filter(|x| *x != 0.0).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.contains(&1.0) && nonzero.contains(&-1.0));
    }
    // Constants are in the kernel.
    let ones = nalgebra::DVector::from_element(2 * n, 1.0);
    assert!((&d * ones).amax() < 1e-14);
    let di = assemble_operator(n, AnalysisBc::Ibvp).unwrap();
    assert_eq!(di.nrows(), 2 * n);
    assert!(assemble_operator(3, AnalysisBc::Periodic).is_err());
}

#[test]
fn spectra_are_stable() {
    for n in [20, 100] {
        for bc in [AnalysisBc::Periodic, AnalysisBc::Ibvp] {
            let eigs = spectrum(&assemble_operator(n, bc).unwrap()).unwrap();
            assert_eq!(eigs.len(), 2 * n);
            let max_re = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            assert!(max_re <= 1e-8, "N = {n} {bc:?}: {max_re:e}");
        }
    }
    let eigs = spectrum(&assemble_operator(20, AnalysisBc::Periodic).unwrap()).unwrap();
    assert!(eigs.iter().any(|z| z.norm() < 1e-10));
}

#[test]
fn periodic_spectrum_matches_symbol() {
    let eigs = spectrum(&assemble_operator(20, AnalysisBc::Periodic).unwrap()).unwrap();
    let d = hausdorff(&eigs, &periodic_symbol_spectrum(20));
    assert!(d <= 1e-8, "{d:e}");
    assert_eq!(hausdorff(&eigs, &eigs), 0.0);
}

#[test]
fn spectrum_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = export_spectra(dir.path(), &[20]).unwrap();
    assert_eq!(out.len(), 2);
    for (path, max_re) in out {
        assert!(max_re <= 1e-8);
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("re,im"));
        assert_eq!(lines.count(), 40);
    }
}

#[test]
fn superconvergence_on_coarse_grids() {
    let rows = superconvergence_study(&[10, 20, 40], 0.1, 1.0).unwrap();
    let (c, n) = superconvergence_orders(&rows);
    assert!((c[1] - 4.0).abs() < 0.3 && (n[1] - 4.0).abs() < 0.3, "{c:?} {n:?}");
}
