//! Benchmark catalog: initial data, boundary sets, end times and exact or
//! reference solutions.

pub mod quadrature;
pub mod reference;
pub mod riemann;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{Boundaries1D, Boundaries2D, BoundaryKind};
use crate::linalg::{self, Vector};
use crate::mesh::{Grid1D, Grid2D, HybridField1D, HybridField2D};
use crate::physics::{Advection1D, Euler1D, Euler2D, Kpp};
use crate::time::{sample_initial_1d, sample_initial_2d};
use crate::viscosity::Source2D;
use crate::{Error, Result};
use riemann::{solve_riemann, Primitive, RiemannSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemId {
    AdvCauchy,
    AdvIbvp,
    AdvGste,
    EulerCollision,
    EulerCollisionWall,
    Sod,
    Kpp,
    IsentropicVortex,
    TaylorGreen,
    ShockBubble,
}

impl ProblemId {
    pub const ALL: [ProblemId; 10] = [
        ProblemId::AdvCauchy,
        ProblemId::AdvIbvp,
        ProblemId::AdvGste,
        ProblemId::EulerCollision,
        ProblemId::EulerCollisionWall,
        ProblemId::Sod,
        ProblemId::Kpp,
        ProblemId::IsentropicVortex,
        ProblemId::TaylorGreen,
        ProblemId::ShockBubble,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::AdvCauchy => "adv-cauchy",
            ProblemId::AdvIbvp => "adv-ibvp",
            ProblemId::AdvGste => "adv-gste",
            ProblemId::EulerCollision => "euler-collision",
            ProblemId::EulerCollisionWall => "euler-collision-wall",
            ProblemId::Sod => "sod",
            ProblemId::Kpp => "kpp",
            ProblemId::IsentropicVortex => "isentropic-vortex",
            ProblemId::TaylorGreen => "taylor-green",
            ProblemId::ShockBubble => "shock-bubble",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            ProblemId::Kpp | ProblemId::IsentropicVortex | ProblemId::TaylorGreen | ProblemId::ShockBubble => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem id '{s}'")))
    }
}

/// Catalog entry, independent of the equation type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemInfo {
    pub id: ProblemId,
    pub equation: &'static str,
    /// `[x0, x1]` or `[x0, x1, y0, y1]`.
    pub domain: Vec<f64>,
    pub boundaries: &'static str,
    pub t_end: f64,
    /// Cells per direction in 1D, `[nx, ny]` pairs in 2D.
    pub default_grids: Vec<Vec<usize>>,
    pub exact_solution: bool,
    /// Fine grid of the self-refinement reference, when one is used.
    pub reference_cells: Option<usize>,
    pub description: &'static str,
}

pub fn problem_catalog() -> Vec<ProblemInfo> {
    ProblemId::ALL.into_iter().map(problem_info).collect()
}

fn doubling(start: usize, count: usize) -> Vec<Vec<usize>> {
    (0..count).map(|k| vec![start << k]).collect()
}

fn square_doubling(start: usize, count: usize) -> Vec<Vec<usize>> {
    (0..count).map(|k| vec![start << k, start << k]).collect()
}

pub fn problem_info(id: ProblemId) -> ProblemInfo {
    use ProblemId::*;
    let (equation, domain, boundaries, t_end, grids, exact, reference, description) = match id {
        AdvCauchy => (
            "advection",
            vec![0.0, 1.0],
            "periodic",
            1.0,
            doubling(40, 7),
            true,
            None,
            "w_t + w_x = 0, w0 = sin(2 pi x) + cos(4 pi x)",
        ),
        AdvIbvp => (
            "advection",
            vec![0.0, 1.0],
            "dirichlet inflow at x = 0, characteristic outflow",
            1.0,
            doubling(40, 7),
            true,
            None,
            "as adv-cauchy with inflow data -sin(2 pi t) + cos(4 pi t)",
        ),
        AdvGste => (
            "advection",
            vec![-1.0, 1.0],
            "periodic",
            8.0,
            vec![vec![320]],
            true,
            None,
            "Gaussians, square, sharp triangle and half ellipse advected four periods",
        ),
        EulerCollision => (
            "euler",
            vec![-2.0, 2.0],
            "periodic",
            1.2,
            doubling(40, 7),
            false,
            Some(DEFAULT_COLLISION_REFERENCE),
            "two symmetric acoustic bumps, gamma = 1.4, eps = 0.1",
        ),
        EulerCollisionWall => (
            "euler",
            vec![-2.0, 2.0],
            "reflecting walls",
            1.2,
            doubling(40, 7),
            false,
            Some(DEFAULT_COLLISION_REFERENCE),
            "euler-collision with walls at x = -2 and x = 2",
        ),
        Sod => (
            "euler",
            vec![-2.0, 2.0],
            "dirichlet",
            0.8,
            doubling(40, 6),
            true,
            None,
            "Sod shock tube, (1, 0, 1) | (0.125, 0, 0.1)",
        ),
        Kpp => (
            "kpp",
            vec![-2.0, 2.0, -2.5, 1.5],
            "dirichlet pi/4",
            1.0,
            vec![vec![240, 240]],
            false,
            None,
            "w_t + sin(w)_x + cos(w)_y = 0 with a 7 pi / 2 disc",
        ),
        IsentropicVortex => (
            "euler",
            vec![-5.0, 5.0, -5.0, 5.0],
            "periodic",
            10.0,
            square_doubling(10, 5),
            true,
            None,
            "isentropic vortex, eps = 5, advected once across the diagonal",
        ),
        TaylorGreen => (
            "euler",
            vec![0.0, 1.0, 0.0, 1.0],
            "walls",
            0.5,
            square_doubling(10, 5),
            true,
            None,
            "steady Taylor-Green vortex with heat source, gamma = 5/3",
        ),
        ShockBubble => (
            "euler",
            vec![-0.1, 1.6, 0.0, 0.5],
            "inflow / outflow / walls",
            0.4,
            vec![vec![340, 100]],
            false,
            None,
            "Mach shock hitting a light bubble, upper half domain",
        ),
    };
    ProblemInfo {
        id,
        equation,
        domain,
        boundaries,
        t_end,
        default_grids: grids,
        exact_solution: exact,
        reference_cells: reference,
        description,
    }
}

/// Default fine grid for the collision reference.
pub const DEFAULT_COLLISION_REFERENCE: usize = 20480;

pub type InitialFn1D<const N: usize> = Arc<dyn Fn(f64) -> Vector<N> + Send + Sync>;
/// Exact solution `(x, t) -> W`.
pub type ExactFn1D<const N: usize> = Arc<dyn Fn(f64, f64) -> Vector<N> + Send + Sync>;
/// Non-smooth points of the exact solution at time `t`.
pub type BreaksFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;
pub type InitialFn2D<const N: usize> = Arc<dyn Fn(f64, f64) -> Vector<N> + Send + Sync>;
pub type ExactFn2D<const N: usize> = Arc<dyn Fn(f64, f64, f64) -> Vector<N> + Send + Sync>;

/// A fully specified 1D benchmark.
#[derive(Clone)]
pub struct Problem1D<const N: usize, M> {
    pub id: ProblemId,
    pub model: M,
    pub domain: (f64, f64),
    pub periodic: bool,
    pub bcs: Boundaries1D<N>,
    pub t_end: f64,
    pub initial: InitialFn1D<N>,
    pub exact: Option<ExactFn1D<N>>,
    pub breaks: BreaksFn,
}

impl<const N: usize, M> Problem1D<N, M> {
    pub fn grid(&self, n: usize) -> Result<Grid1D> {
        Grid1D::new(self.domain.0, self.domain.1, n, self.periodic)
    }

    pub fn initial_state(&self, grid: &Grid1D) -> HybridField1D<N> {
        sample_initial_1d(|x| (self.initial)(x), grid)
    }

    /// Exact nodal values and accurate cell averages at time `t`.
    pub fn exact_state(&self, grid: &Grid1D, t: f64) -> Option<HybridField1D<N>> {
        let exact = self.exact.as_ref()?;
        let breaks = (self.breaks)(t);
        let mut out = HybridField1D::zeros(grid);
        for (j, w) in out.nodal.iter_mut().enumerate() {
            *w = exact(grid.node(j), t);
        }
        let pieces = if breaks.is_empty() { 1 } else { 4 };
        for (j, w) in out.cells.iter_mut().enumerate() {
            *w = quadrature::average(&|x| exact(x, t), grid.node(j), grid.node(j + 1), &breaks, pieces);
        }
        Some(out)
    }
}

/// A fully specified 2D benchmark.
#[derive(Clone)]
pub struct Problem2D<const N: usize, M> {
    pub id: ProblemId,
    pub model: M,
    pub domain: ((f64, f64), (f64, f64)),
    pub periodic: (bool, bool),
    pub bcs: Boundaries2D<N>,
    pub t_end: f64,
    pub initial: InitialFn2D<N>,
    pub exact: Option<ExactFn2D<N>>,
    pub source: Option<Arc<dyn Source2D<N>>>,
}

impl<const N: usize, M> Problem2D<N, M> {
    pub fn grid(&self, nx: usize, ny: usize) -> Result<Grid2D> {
        let ((x0, x1), (y0, y1)) = self.domain;
        Ok(Grid2D::new(
            Grid1D::new(x0, x1, nx, self.periodic.0)?,
            Grid1D::new(y0, y1, ny, self.periodic.1)?,
        ))
    }

    pub fn initial_state(&self, grid: &Grid2D) -> HybridField2D<N> {
        sample_initial_2d(|x, y| (self.initial)(x, y), grid)
    }

    /// Exact nodal values and 5×5 Gauss cell averages (smooth solutions only).
    pub fn exact_state(&self, grid: &Grid2D, t: f64) -> Option<HybridField2D<N>> {
        let exact = self.exact.as_ref()?;
        let mut out = HybridField2D::zeros(grid);
        for j in 0..out.nny {
            for i in 0..out.nnx {
                out.nodal[j * out.nnx + i] = exact(grid.x.node(i), grid.y.node(j), t);
            }
        }
        for j in 0..grid.y.n {
            for i in 0..grid.x.n {
                out.cells[j * grid.x.n + i] = quadrature::average_2d(
                    &|x, y| exact(x, y, t),
                    (grid.x.node(i), grid.x.node(i + 1)),
                    (grid.y.node(j), grid.y.node(j + 1)),
                    1,
                );
            }
        }
        Some(out)
    }
}

/// Wrap `x` into `[a, b)`.
fn wrap(x: f64, a: f64, b: f64) -> f64 {
    let l = b - a;
    let mut y = (x - a).rem_euclid(l) + a;
    if y >= b {
        y -= l;
    }
    y
}

fn adv_cauchy_profile(x: f64) -> f64 {
    (2.0 * PI * x).sin() + (4.0 * PI * x).cos()
}

pub fn adv_cauchy() -> Problem1D<1, Advection1D> {
    Problem1D {
        id: ProblemId::AdvCauchy,
        model: Advection1D { speed: 1.0 },
        domain: (0.0, 1.0),
        periodic: true,
        bcs: Boundaries1D::periodic(),
        t_end: 1.0,
        initial: Arc::new(|x| [adv_cauchy_profile(x)]),
        exact: Some(Arc::new(|x, t| [adv_cauchy_profile(x - t)])),
        breaks: Arc::new(|_| Vec::new()),
    }
}

pub fn adv_ibvp() -> Problem1D<1, Advection1D> {
    Problem1D {
        id: ProblemId::AdvIbvp,
        model: Advection1D { speed: 1.0 },
        domain: (0.0, 1.0),
        periodic: false,
        bcs: Boundaries1D {
            left: BoundaryKind::dirichlet(|t| [-(2.0 * PI * t).sin() + (4.0 * PI * t).cos()]),
            right: BoundaryKind::OneSided,
        },
        t_end: 1.0,
        initial: Arc::new(|x| [adv_cauchy_profile(x)]),
        exact: Some(Arc::new(|x, t| [adv_cauchy_profile(x - t)])),
        breaks: Arc::new(|_| Vec::new()),
    }
}

const GSTE_A: f64 = 0.5;
const GSTE_Z: f64 = -0.7;
const GSTE_DELTA: f64 = 0.005;
const GSTE_ALPHA: f64 = 10.0;

fn gste_beta() -> f64 {
    2.0_f64.ln() / (36.0 * GSTE_DELTA * GSTE_DELTA)
}

/// Composite profile on `[-1, 1]`.
pub fn gste_profile(x: f64) -> f64 {
    let g = |z: f64| (-gste_beta() * (x - z) * (x - z)).exp();
    let l = |a: f64| (1.0 - GSTE_ALPHA * GSTE_ALPHA * (x - a) * (x - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(GSTE_Z - GSTE_DELTA) + 4.0 * g(GSTE_Z) + g(GSTE_Z + GSTE_DELTA)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (l(GSTE_A - GSTE_DELTA) + 4.0 * l(GSTE_A) + l(GSTE_A + GSTE_DELTA)) / 6.0
    } else {
        0.0
    }
}

/// Kinks and jumps of the profile at `t = 0`.
pub const GSTE_BREAKS: [f64; 12] = [-0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.405, 0.5, 0.595, 0.6];

pub fn adv_gste() -> Problem1D<1, Advection1D> {
    Problem1D {
        id: ProblemId::AdvGste,
        model: Advection1D { speed: 1.0 },
        domain: (-1.0, 1.0),
        periodic: true,
        bcs: Boundaries1D::periodic(),
        t_end: 8.0,
        initial: Arc::new(|x| [gste_profile(x)]),
        exact: Some(Arc::new(|x, t| [gste_profile(wrap(x - t, -1.0, 1.0))])),
        breaks: Arc::new(|t| {
            let mut b: Vec<f64> = GSTE_BREAKS.iter().map(|x| wrap(x + t, -1.0, 1.0)).collect();
            b.sort_by(f64::total_cmp);
            b
        }),
    }
}

pub const COLLISION_EPS: f64 = 0.1;

/// Smooth compact bumps centred at ±0.5.
pub fn collision_bump(x: f64) -> f64 {
    let b = |c: f64| (0.5 * (1.0 - (2.0 * PI * (x - c)).cos())).powi(4);
    if (-1.5..=-0.5).contains(&x) {
        b(-0.5)
    } else if (0.5..=1.5).contains(&x) {
        b(0.5)
    } else {
        0.0
    }
}

fn collision(id: ProblemId, bcs: Boundaries1D<3>, periodic: bool) -> Problem1D<3, Euler1D> {
    let model = Euler1D::new(1.4);
    let m = model;
    Problem1D {
        id,
        model,
        domain: (-2.0, 2.0),
        periodic,
        bcs,
        t_end: 1.2,
        initial: Arc::new(move |x| {
            let b = collision_bump(x);
            m.conservative(1.4 + 1.4 * COLLISION_EPS * b, 0.0, 1.0 + COLLISION_EPS * b)
        }),
        exact: None,
        breaks: Arc::new(|_| Vec::new()),
    }
}

pub fn euler_collision() -> Problem1D<3, Euler1D> {
    collision(ProblemId::EulerCollision, Boundaries1D::periodic(), true)
}

pub fn euler_collision_wall() -> Problem1D<3, Euler1D> {
    collision(
        ProblemId::EulerCollisionWall,
        Boundaries1D {
            left: BoundaryKind::Wall,
            right: BoundaryKind::Wall,
        },
        false,
    )
}

pub const SOD_LEFT: Primitive = Primitive {
    rho: 1.0,
    v: 0.0,
    p: 1.0,
};
pub const SOD_RIGHT: Primitive = Primitive {
    rho: 0.125,
    v: 0.0,
    p: 0.1,
};

pub fn sod_solution() -> RiemannSolution {
    solve_riemann(SOD_LEFT, SOD_RIGHT, 1.4).expect("Sod data have a regular Riemann solution")
}

pub fn sod() -> Problem1D<3, Euler1D> {
    let model = Euler1D::new(1.4);
    let m = model;
    let sol = sod_solution();
    let (l, r) = (m.conservative(1.0, 0.0, 1.0), m.conservative(0.125, 0.0, 0.1));
    Problem1D {
        id: ProblemId::Sod,
        model,
        domain: (-2.0, 2.0),
        periodic: false,
        bcs: Boundaries1D {
            left: BoundaryKind::Inflow(l),
            right: BoundaryKind::Inflow(r),
        },
        t_end: 0.8,
        initial: Arc::new(move |x| {
            if x < 0.0 {
                l
            } else if x > 0.0 {
                r
            } else {
                linalg::mid(&l, &r)
            }
        }),
        exact: Some(Arc::new(move |x, t| {
            let s = if t > 0.0 {
                sol.sample(x / t)
            } else if x < 0.0 {
                SOD_LEFT
            } else {
                SOD_RIGHT
            };
            m.conservative(s.rho, s.v, s.p)
        })),
        breaks: Arc::new(move |t| sol.wave_speeds().iter().map(|s| s * t).collect()),
    }
}

pub fn kpp() -> Problem2D<1, Kpp> {
    let outside = [PI / 4.0];
    Problem2D {
        id: ProblemId::Kpp,
        model: Kpp,
        domain: ((-2.0, 2.0), (-2.5, 1.5)),
        periodic: (false, false),
        bcs: Boundaries2D::uniform(BoundaryKind::Inflow(outside)),
        t_end: 1.0,
        initial: Arc::new(move |x, y| {
            if (x * x + y * y).sqrt() <= 1.0 {
                [3.5 * PI]
            } else {
                outside
            }
        }),
        exact: None,
        source: None,
    }
}

pub const VORTEX_EPS: f64 = 5.0;

pub fn vortex_primitive(x: f64, y: f64, gamma: f64) -> [f64; 4] {
    let r2 = x * x + y * y;
    let base = 1.0 - VORTEX_EPS * VORTEX_EPS / 8.0 * (gamma - 1.0) / (gamma * PI * PI) * (1.0 - r2).exp();
    let e = VORTEX_EPS / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
    [
        base.powf(1.0 / (gamma - 1.0)),
        1.0 - e * y,
        1.0 + e * x,
        base.powf(gamma / (gamma - 1.0)),
    ]
}

pub fn isentropic_vortex() -> Problem2D<4, Euler2D> {
    let model = Euler2D::new(1.4);
    let m = model;
    let at = move |x: f64, y: f64| {
        let [r, u, v, p] = vortex_primitive(x, y, m.gamma);
        m.conservative(r, u, v, p)
    };
    Problem2D {
        id: ProblemId::IsentropicVortex,
        model,
        domain: ((-5.0, 5.0), (-5.0, 5.0)),
        periodic: (true, true),
        bcs: Boundaries2D::periodic(),
        t_end: 10.0,
        initial: Arc::new(at),
        exact: Some(Arc::new(move |x, y, t| {
            at(wrap(x - t, -5.0, 5.0), wrap(y - t, -5.0, 5.0))
        })),
        source: None,
    }
}

/// Heating rate of the steady Taylor-Green flow.
pub fn taylor_green_heating(x: f64, y: f64) -> f64 {
    3.0 * PI / 8.0 * ((3.0 * PI * x).cos() * (PI * y).cos() - (PI * x).cos() * (3.0 * PI * y).cos())
}

pub fn taylor_green_primitive(x: f64, y: f64) -> [f64; 4] {
    [
        1.0,
        (PI * x).sin() * (PI * y).cos(),
        -(PI * x).cos() * (PI * y).sin(),
        0.25 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos()) + 1.0,
    ]
}

/// `B = (0, 0, 0, -ρ r)`.
#[derive(Debug, Clone, Copy)]
pub struct TaylorGreenSource;

impl Source2D<4> for TaylorGreenSource {
    fn eval(&self, x: f64, y: f64, _t: f64, w: &Vector<4>) -> Vector<4> {
        [0.0, 0.0, 0.0, -w[0] * taylor_green_heating(x, y)]
    }
}

pub fn taylor_green() -> Problem2D<4, Euler2D> {
    let model = Euler2D::new(5.0 / 3.0);
    let m = model;
    let at = move |x: f64, y: f64| {
        let [r, u, v, p] = taylor_green_primitive(x, y);
        m.conservative(r, u, v, p)
    };
    Problem2D {
        id: ProblemId::TaylorGreen,
        model,
        domain: ((0.0, 1.0), (0.0, 1.0)),
        periodic: (false, false),
        bcs: Boundaries2D::uniform(BoundaryKind::Wall),
        t_end: 0.5,
        initial: Arc::new(at),
        exact: Some(Arc::new(move |x, y, _t| at(x, y))),
        source: Some(Arc::new(TaylorGreenSource)),
    }
}

pub const SHOCK_BUBBLE_POST_SHOCK: [f64; 4] = [3.81, 2.58, 0.0, 10.0];

pub fn shock_bubble() -> Problem2D<4, Euler2D> {
    let model = Euler2D::new(1.4);
    let m = model;
    let [r, u, v, p] = SHOCK_BUBBLE_POST_SHOCK;
    let inflow = m.conservative(r, u, v, p);
    Problem2D {
        id: ProblemId::ShockBubble,
        model,
        domain: ((-0.1, 1.6), (0.0, 0.5)),
        periodic: (false, false),
        bcs: Boundaries2D {
            left: BoundaryKind::Inflow(inflow),
            right: BoundaryKind::Outflow,
            bottom: BoundaryKind::Wall,
            top: BoundaryKind::Wall,
        },
        t_end: 0.4,
        initial: Arc::new(move |x, y| {
            if x < 0.0 {
                inflow
            } else if (x - 0.3).powi(2) + y * y <= 0.04 {
                m.conservative(0.5, 0.0, 0.0, 1.0)
            } else {
                m.conservative(1.0, 0.0, 0.0, 1.0)
            }
        }),
        exact: None,
        source: None,
    }
}
