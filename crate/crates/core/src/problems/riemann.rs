//! Exact solution of the 1D Euler Riemann problem for an ideal gas.

use crate::{Error, Result};

/// Primitive state `(ρ, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, v: f64, p: f64) -> Self {
        Primitive { rho, v, p }
    }
}

pub const RIEMANN_TOL: f64 = 1e-12;
pub const RIEMANN_MAX_ITER: usize = 100;

/// Star-region solution with the wave pattern needed for sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub v_star: f64,
}

/// `f_K(p)` and its derivative for one side.
fn pressure_function(p: f64, s: &Primitive, gamma: f64) -> (f64, f64) {
    let c = (gamma * s.p / s.rho).sqrt();
    if p > s.p {
        let a = 2.0 / ((gamma + 1.0) * s.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let q = (a / (p + b)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + b)))
    } else {
        let e = (gamma - 1.0) / (2.0 * gamma);
        let r = p / s.p;
        (
            2.0 * c / (gamma - 1.0) * (r.powf(e) - 1.0),
            1.0 / (s.rho * c) * r.powf(-(gamma + 1.0) / (2.0 * gamma)),
        )
    }
}

fn sound(s: &Primitive, gamma: f64) -> f64 {
    (gamma * s.p / s.rho).sqrt()
}

/// Newton iteration on the pressure function for the star state.
pub fn solve_riemann(left: Primitive, right: Primitive, gamma: f64) -> Result<RiemannSolution> {
    for (side, s) in [("left", &left), ("right", &right)] {
        if !(s.rho > 0.0 && s.p > 0.0 && s.v.is_finite()) {
            return Err(Error::Config(format!("{side} Riemann state is not physical: {s:?}")));
        }
    }
    let (cl, cr) = (sound(&left, gamma), sound(&right, gamma));
    let dv = right.v - left.v;
    if 2.0 / (gamma - 1.0) * (cl + cr) <= dv {
        return Err(Error::Numerical("Riemann data generate vacuum".into()));
    }
    // Two-rarefaction guess: exact when both waves are rarefactions.
    let e = (gamma - 1.0) / (2.0 * gamma);
    let num = cl + cr - 0.5 * (gamma - 1.0) * dv;
    let den = cl / left.p.powf(e) + cr / right.p.powf(e);
    let mut p = (num / den).powf(1.0 / e).max(RIEMANN_TOL);
    for _ in 0..RIEMANN_MAX_ITER {
        let (fl, dl) = pressure_function(p, &left, gamma);
        let (fr, dr) = pressure_function(p, &right, gamma);
        let mut next = p - (fl + fr + dv) / (dl + dr);
        if next <= 0.0 {
            next = 0.5 * p;
        }
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < RIEMANN_TOL {
            let (fl, _) = pressure_function(p, &left, gamma);
            let (fr, _) = pressure_function(p, &right, gamma);
            return Ok(RiemannSolution {
                left,
                right,
                gamma,
                p_star: p,
                v_star: 0.5 * (left.v + right.v) + 0.5 * (fr - fl),
            });
        }
    }
    Err(Error::Numerical(format!(
        "Riemann pressure iteration did not converge in {RIEMANN_MAX_ITER} iterations"
    )))
}

impl RiemannSolution {
    fn star_density(&self, s: &Primitive) -> f64 {
        let g = self.gamma;
        let r = self.p_star / s.p;
        if self.p_star > s.p {
            let gm = (g - 1.0) / (g + 1.0);
            s.rho * (r + gm) / (gm * r + 1.0)
        } else {
            s.rho * r.powf(1.0 / g)
        }
    }

    /// Solution at similarity coordinate `xi = (x - x0)/t`.
    pub fn sample(&self, xi: f64) -> Primitive {
        let g = self.gamma;
        let (l, r) = (&self.left, &self.right);
        let (ps, vs) = (self.p_star, self.v_star);
        if xi <= vs {
            let cl = sound(l, g);
            if ps > l.p {
                let sl = l.v - cl * ((g + 1.0) / (2.0 * g) * ps / l.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= sl {
                    *l
                } else {
                    Primitive::new(self.star_density(l), vs, ps)
                }
            } else {
                let head = l.v - cl;
                let cs = cl * (ps / l.p).powf((g - 1.0) / (2.0 * g));
                let tail = vs - cs;
                if xi <= head {
                    *l
                } else if xi >= tail {
                    Primitive::new(self.star_density(l), vs, ps)
                } else {
                    let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (l.v - xi));
                    let v = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.v + xi);
                    let rho = l.rho * (c / cl).powf(2.0 / (g - 1.0));
                    Primitive::new(rho, v, l.p * (c / cl).powf(2.0 * g / (g - 1.0)))
                }
            }
        } else {
            let cr = sound(r, g);
            if ps > r.p {
                let sr = r.v + cr * ((g + 1.0) / (2.0 * g) * ps / r.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= sr {
                    *r
                } else {
                    Primitive::new(self.star_density(r), vs, ps)
                }
            } else {
                let head = r.v + cr;
                let cs = cr * (ps / r.p).powf((g - 1.0) / (2.0 * g));
                let tail = vs + cs;
                if xi >= head {
                    *r
                } else if xi <= tail {
                    Primitive::new(self.star_density(r), vs, ps)
                } else {
                    let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (r.v - xi));
                    let v = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.v + xi);
                    let rho = r.rho * (c / cr).powf(2.0 / (g - 1.0));
                    Primitive::new(rho, v, r.p * (c / cr).powf(2.0 * g / (g - 1.0)))
                }
            }
        }
    }

    /// Similarity speeds where the solution is not smooth (wave edges,
    /// contact), sorted.
    pub fn wave_speeds(&self) -> Vec<f64> {
        let g = self.gamma;
        let (l, r) = (&self.left, &self.right);
        let (cl, cr) = (sound(l, g), sound(r, g));
        let mut s = vec![self.v_star];
        if self.p_star > l.p {
            s.push(l.v - cl * ((g + 1.0) / (2.0 * g) * self.p_star / l.p + (g - 1.0) / (2.0 * g)).sqrt());
        } else {
            s.push(l.v - cl);
            s.push(self.v_star - cl * (self.p_star / l.p).powf((g - 1.0) / (2.0 * g)));
        }
        if self.p_star > r.p {
            s.push(r.v + cr * ((g + 1.0) / (2.0 * g) * self.p_star / r.p + (g - 1.0) / (2.0 * g)).sqrt());
        } else {
            s.push(r.v + cr);
            s.push(self.v_star + cr * (self.p_star / r.p).powf((g - 1.0) / (2.0 * g)));
        }
        s.sort_by(f64::total_cmp);
        s
    }

    /// Speed of the shock on the right, if there is one.
    pub fn right_shock_speed(&self) -> Option<f64> {
        let g = self.gamma;
        let r = &self.right;
        (self.p_star > r.p)
            .then(|| r.v + sound(r, g) * ((g + 1.0) / (2.0 * g) * self.p_star / r.p + (g - 1.0) / (2.0 * g)).sqrt())
    }
}

/// Primitive solution at `x_over_t` for the given data.
pub fn exact_riemann(left: Primitive, right: Primitive, gamma: f64, x_over_t: f64) -> Result<Primitive> {
    Ok(solve_riemann(left, right, gamma)?.sample(x_over_t))
}
