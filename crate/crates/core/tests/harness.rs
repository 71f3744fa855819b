use std::fs;
use std::path::Path;

use hv_core::harness::norms::*;
use hv_core::harness::output::*;
use hv_core::harness::{convergence_study, parse_config, run, RunConfig, Scheme};
use hv_core::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use hv_core::problems::ProblemId;
use hv_core::time::{sample_initial_1d, sample_initial_2d};

fn small(problem: ProblemId, dir: &Path, n: usize) -> RunConfig {
    let mut c = RunConfig::defaults(problem);
    c.output_dir = dir.to_path_buf();
    c.cache_dir = dir.join("cache");
    c.grid = if problem.dimension() == 2 { vec![n, n] } else { vec![n] };
    c
}

#[test]
fn config_examples() {
    let c = parse_config("", Some(ProblemId::Sod)).unwrap();
    assert_eq!((c.alpha_cfl, c.z0, c.scheme), (0.6, 0.04, Scheme::Hv));
    let c = parse_config("problem = \"kpp\"\nz0 = 0.002\n", None).unwrap();
    assert_eq!(c.z0, 0.002);
    assert!(parse_config("problem = \"sod\"\nalpha_cfl = 0.9\n", None).is_err());
    assert!(parse_config("n = 40\n", None)
        .unwrap_err()
        .to_string()
        .contains("problem"));
    let e = parse_config("problem = \"sod\"\n\nt_end = \"soon\"\n", None)
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 3"), "{e}");
    let c = parse_config("problem = \"isentropic-vortex\"\nn = 32\n", None).unwrap();
    assert_eq!(c.grid, vec![32, 32]);
    let c = parse_config("problem = \"gste\"\n", None);
    assert!(c.is_err());
    let c = parse_config("problem = \"adv-gste\"\nscheme = \"muscl\"\n", None).unwrap();
    assert_eq!(c.alpha_cfl, 0.4);
}

#[test]
fn l1_examples() {
    let g = Grid1D::new(0.0, 1.0, 10, false).unwrap();
    let a = sample_initial_1d(|x| [x * x], &g);
    let vars = VarSet::<1>::components();
    let zero = l1_error_1d(&a, &a, &g, &vars).unwrap();
    assert_eq!((zero.cell[0], zero.nodal.as_ref().unwrap()[0]), (0.0, 0.0));

    let mut b = a.clone();
    b.cells.iter_mut().chain(b.nodal.iter_mut()).for_each(|w| w[0] += 0.3);
    let e = l1_error_1d(&b, &a, &g, &vars).unwrap();
    assert!((e.cell[0] - 0.3).abs() < 1e-14 && (e.nodal.unwrap()[0] - 0.3).abs() < 1e-14);

    let mut c = a.clone();
    c.cells[4][0] += 1.0;
    let e = l1_error_1d(&c, &a, &g, &vars).unwrap();
    assert!((e.cell[0] - 0.1).abs() < 1e-15);

    let short = sample_initial_1d(|x| [x], &Grid1D::new(0.0, 1.0, 8, false).unwrap());
    assert!(l1_error_1d(&short, &a, &g, &vars).is_err());

    let g2 = Grid2D::new(
        Grid1D::new(0.0, 2.0, 6, false).unwrap(),
        Grid1D::new(0.0, 1.0, 4, true).unwrap(),
    );
    let f: HybridField2D<1> = sample_initial_2d(|x, y| [x + y], &g2);
    let mut f2 = f.clone();
    f2.cells.iter_mut().chain(f2.nodal.iter_mut()).for_each(|w| w[0] -= 0.5);
    let e = l1_error_2d(&f2, &f, &g2, &vars).unwrap();
    // Weights sum to the area, 2.
    assert!((e.cell[0] - 1.0).abs() < 1e-14 && (e.nodal.unwrap()[0] - 1.0).abs() < 1e-14);
}

#[test]
fn observed_order_of_synthetic_errors() {
    let h = [0.1_f64, 0.05, 0.025];
    let e: Vec<f64> = h.iter().map(|h| 7.0 * h.powi(4)).collect();
    for p in observed_orders(&h, &e) {
        assert!((p - 4.0).abs() < 1e-12);
    }
}

#[test]
fn dump_shapes_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid1D::new(0.0, 1.0, 4, false).unwrap();
    let f: HybridField1D<1> = sample_initial_1d(|x| [(3.0 * x).sin() / 7.0], &g);
    let vars = VarSet::<1>::components();
    let path = dir.path().join("f.csv");
    write_fields_1d(&path, &g, &f, &vars).unwrap();
    let (header, rows) = read_fields_1d(&path).unwrap();
    assert_eq!(header, ["w"]);
    assert_eq!(rows.iter().filter(|r| r.0 == "node").count(), 5);
    assert_eq!(rows.iter().filter(|r| r.0 == "cell").count(), 4);
    for (j, w) in f.nodal.iter().enumerate() {
        assert_eq!(rows[j].2[0], w[0]);
    }
    for (j, w) in f.cells.iter().enumerate() {
        assert_eq!(rows[5 + j].2[0], w[0]);
    }

    let g2 = Grid2D::new(
        Grid1D::new(0.0, 1.0, 10, false).unwrap(),
        Grid1D::new(0.0, 1.0, 10, false).unwrap(),
    );
    let f2: HybridField2D<1> = sample_initial_2d(|x, y| [x * y], &g2);
    let paths = write_fields_2d(dir.path(), "t_", &g2, &f2, &vars).unwrap();
    let cells = fs::read_to_string(dir.path().join("t_cells_w.csv")).unwrap();
    let rows: Vec<&str> = cells.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.split(',').count() == 10));
    let nodes = fs::read_to_string(dir.path().join("t_nodes_w.csv")).unwrap();
    assert_eq!(nodes.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert_eq!(paths.len(), 2);
}

#[test]
fn runs_are_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for problem in [ProblemId::AdvCauchy, ProblemId::Sod] {
        let ma = run(&small(problem, a.path(), 20)).unwrap();
        let mb = run(&small(problem, b.path(), 20)).unwrap();
        assert_eq!(ma.schema, MANIFEST_SCHEMA);
        assert_eq!(ma.files, mb.files);
        assert!(!ma.files.is_empty());
        for f in ma.files.iter().chain([&"manifest.json".to_string()]) {
            let name = Path::new(f).file_name().unwrap();
            let (x, y) = (
                fs::read(a.path().join(name)).unwrap(),
                fs::read(b.path().join(name)).unwrap(),
            );
            assert!(x == y, "{problem}: {f} differs");
        }
    }
}

#[test]
fn run_manifest_fields() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(&small(ProblemId::AdvCauchy, dir.path(), 64)).unwrap();
    assert_eq!(m.problem, "adv-cauchy");
    assert_eq!(m.t_final, 1.0);
    let e = m.errors.as_ref().unwrap().cell[0];
    assert!(e < 1e-2, "{e}");
    assert!(m.conservation_drift.iter().all(|d| d.abs() < 1e-12));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["steps"], m.steps);
}

#[test]
fn study_writes_csv_and_rejects_one_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(ProblemId::AdvCauchy, dir.path(), 10);
    assert!(convergence_study(&cfg, &[20]).is_err());
    assert!(convergence_study(&cfg, &[10, 30]).is_err());
    let r = convergence_study(&cfg, &[10, 20, 40]).unwrap();
    assert!(!r.failed());
    assert_eq!(r.rows.len(), 3);
    let csv = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("n,h,steps,status,cell_w,node_w,order_cell_w,order_node_w")
    );
    assert_eq!(lines.count(), 3);
    assert!(r.cell_orders("w")[1] > 3.0);
}
