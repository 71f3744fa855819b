//! Accurate cell averages of exact solutions, used for error norms.

use crate::linalg::Vector;

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    128.0 / 225.0,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Average of `f` over `[a, b]` with 5-point Gauss-Legendre on `pieces` equal
/// sub-intervals, additionally split at any `breaks` inside `(a, b)`.
pub fn average<const N: usize>(
    f: &dyn Fn(f64) -> Vector<N>,
    a: f64,
    b: f64,
    breaks: &[f64],
    pieces: usize,
) -> Vector<N> {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    let mut acc = [0.0; N];
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let step = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let c = lo + (p as f64 + 0.5) * step;
            for (x, wt) in GL5_X.iter().zip(GL5_W) {
                let v = f(c + 0.5 * step * x);
                for k in 0..N {
                    acc[k] += 0.5 * step * wt * v[k];
                }
            }
        }
    }
    acc.map(|v| v / (b - a))
}

/// 2D tensor-product average over `[x0, x1] × [y0, y1]`.
pub fn average_2d<const N: usize>(
    f: &dyn Fn(f64, f64) -> Vector<N>,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    pieces: usize,
) -> Vector<N> {
    let inner = |y: f64| average(&|x| f(x, y), x0, x1, &[], pieces);
    average(&inner, y0, y1, &[], pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_nine() {
        let f = |x: f64| [x.powi(9) + x.powi(4)];
        let v = average(&f, 0.0, 1.0, &[], 1);
        assert!((v[0] - (0.1 + 0.2)).abs() < 1e-14);
    }

    #[test]
    fn step_function_with_break() {
        let f = |x: f64| [if x < 0.3 { 1.0 } else { 0.0 }];
        let v = average(&f, 0.0, 1.0, &[0.3], 1);
        assert!((v[0] - 0.3).abs() < 1e-14);
    }
}
