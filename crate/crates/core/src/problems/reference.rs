//! Fine-grid reference solutions: generation, restriction to coarse grids,
//! and an on-disk cache guarded by a checksum.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::Problem1D;
use crate::linalg::Vector;
use crate::mesh::HybridField1D;
use crate::physics::Model1D;
use crate::solver::{Simulation1D, SolverSettings};
use crate::{Error, Result};

/// Coarse-grid view of a fine field: cell averages aggregated over `r`
/// consecutive fine cells, nodes subsampled every `r`-th node.
pub fn restrict_1d<const N: usize>(fine: &HybridField1D<N>, coarse_n: usize) -> Result<HybridField1D<N>> {
    let fine_n = fine.cells.len();
    if coarse_n == 0 || fine_n % coarse_n != 0 {
        return Err(Error::Shape(format!("cannot restrict {fine_n} cells to {coarse_n}")));
    }
    let r = fine_n / coarse_n;
    let cells = fine
        .cells
        .chunks(r)
        .map(|c| {
            let mut acc = [0.0; N];
            for w in c {
                for k in 0..N {
                    acc[k] += w[k];
                }
            }
            acc.map(|v| v / r as f64)
        })
        .collect();
    let nodal = fine.nodal.iter().step_by(r).copied().collect();
    Ok(HybridField1D {
        nodal,
        cells,
        periodic: fine.periodic,
    })
}

/// Aggregate row-major 2D cell averages by an integer factor per direction.
pub fn restrict_cells_2d<const N: usize>(
    fine: &[Vector<N>],
    (fnx, fny): (usize, usize),
    (nx, ny): (usize, usize),
) -> Result<Vec<Vector<N>>> {
    if nx == 0 || ny == 0 || fnx % nx != 0 || fny % ny != 0 || fine.len() != fnx * fny {
        return Err(Error::Shape(format!("cannot restrict {fnx}x{fny} cells to {nx}x{ny}")));
    }
    let (rx, ry) = (fnx / nx, fny / ny);
    let scale = 1.0 / (rx * ry) as f64;
    let mut out = vec![[0.0; N]; nx * ny];
    for j in 0..fny {
        for i in 0..fnx {
            let o = &mut out[(j / ry) * nx + i / rx];
            for k in 0..N {
                o[k] += scale * fine[j * fnx + i][k];
            }
        }
    }
    Ok(out)
}

/// Run the HV solver on `fine_n` cells to the problem's end time.
pub fn reference_run<const N: usize, M: Model1D<N> + Clone>(
    problem: &Problem1D<N, M>,
    fine_n: usize,
    settings: SolverSettings,
) -> Result<HybridField1D<N>> {
    let grid = problem.grid(fine_n)?;
    let state = problem.initial_state(&grid);
    let mut sim = Simulation1D::new(problem.model.clone(), grid, problem.bcs.clone(), settings, state)?;
    sim.run(problem.t_end)?;
    Ok(sim.state)
}

/// Header fields of a cached reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceHeader {
    pub problem: String,
    pub n: usize,
    pub t: f64,
    pub checksum: String,
}

fn body_text<const N: usize>(field: &HybridField1D<N>) -> String {
    let mut s = String::new();
    for (kind, rows) in [("node", &field.nodal), ("cell", &field.cells)] {
        for (j, w) in rows.iter().enumerate() {
            let _ = write!(s, "{kind},{j}");
            for v in w {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
    }
    s
}

fn checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn save_reference<const N: usize>(path: &Path, problem: &str, t: f64, field: &HybridField1D<N>) -> Result<()> {
    let body = body_text(field);
    let header = format!(
        "# problem={problem} n={} t={t} checksum={}\n",
        field.cells.len(),
        checksum(&body)
    );
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    }
    fs::write(path, header + &body).map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_header(line: &str) -> Result<ReferenceHeader> {
    let bad = || Error::Numerical(format!("malformed reference header '{line}'"));
    let rest = line.strip_prefix("# ").ok_or_else(bad)?;
    let mut h = ReferenceHeader {
        problem: String::new(),
        n: 0,
        t: f64::NAN,
        checksum: String::new(),
    };
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(bad)?;
        match k {
            "problem" => h.problem = v.to_string(),
            "n" => h.n = v.parse().map_err(|_| bad())?,
            "t" => h.t = v.parse().map_err(|_| bad())?,
            "checksum" => h.checksum = v.to_string(),
            _ => return Err(bad()),
        }
    }
    Ok(h)
}

/// Load a cached reference, verifying header and checksum.
pub fn load_reference<const N: usize>(
    path: &Path,
    problem: &str,
    n: usize,
    t: f64,
    periodic: bool,
) -> Result<HybridField1D<N>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let (first, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Numerical(format!("{} is empty", path.display())))?;
    let h = parse_header(first)?;
    if h.problem != problem || h.n != n || h.t != t {
        return Err(Error::Numerical(format!(
            "{} holds {} n={} t={}, expected {problem} n={n} t={t}",
            path.display(),
            h.problem,
            h.n,
            h.t
        )));
    }
    if checksum(body) != h.checksum {
        return Err(Error::Numerical(format!("checksum mismatch in {}", path.display())));
    }
    let n_nodes = if periodic { n } else { n + 1 };
    let mut field = HybridField1D {
        nodal: vec![[0.0; N]; n_nodes],
        cells: vec![[0.0; N]; n],
        periodic,
    };
    for line in body.lines() {
        let mut it = line.split(',');
        let kind = it.next().unwrap_or_default();
        let j: usize = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Numerical(format!("bad row '{line}'")))?;
        let vals: Vec<f64> = it
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Numerical(format!("bad row '{line}'")))?;
        let target = match kind {
            "node" => field.nodal.get_mut(j),
            "cell" => field.cells.get_mut(j),
            _ => None,
        };
        match (target, vals.len() == N) {
            (Some(w), true) => w.copy_from_slice(&vals),
            _ => return Err(Error::Numerical(format!("bad row '{line}'"))),
        }
    }
    Ok(field)
}

pub fn cache_path(dir: &Path, problem: &str, n: usize) -> PathBuf {
    dir.join(format!("reference-{problem}-{n}.csv"))
}

/// Cached reference if present and valid, otherwise run and store it.
pub fn load_or_run_reference<const N: usize, M: Model1D<N> + Clone>(
    problem: &Problem1D<N, M>,
    fine_n: usize,
    settings: SolverSettings,
    cache_dir: &Path,
) -> Result<HybridField1D<N>> {
    let id = problem.id.as_str();
    let path = cache_path(cache_dir, id, fine_n);
    if path.exists() {
        match load_reference(&path, id, fine_n, problem.t_end, problem.periodic) {
            Ok(f) => return Ok(f),
            Err(e) => log::warn!("ignoring reference cache: {e}"),
        }
    }
    let field = reference_run(problem, fine_n, settings)?;
    save_reference(&path, id, problem.t_end, &field)?;
    Ok(field)
}
